#include "oscflow/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "oscflow/error.hpp"

namespace oscflow {

FlowNetwork::FlowNetwork(int nodes) { add_nodes(nodes); }

int FlowNetwork::add_nodes(int count) {
    if (frozen_) throw Error(ErrorCode::internal, "network topology is frozen");
    int first = node_count();
    tr_cap_.resize(tr_cap_.size() + count, 0);
    tr_added_.resize(tr_cap_.size(), 0);
    return first;
}

void FlowNetwork::add_edge(int u, int v, cap_t cap, cap_t rev_cap) {
    if (frozen_) throw Error(ErrorCode::internal, "network topology is frozen");
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count() || u == v)
        throw Error(ErrorCode::invalid_argument, "bad edge endpoints");
    if (cap < 0 || rev_cap < 0) throw Error(ErrorCode::invalid_argument, "negative capacity");
    pending_.push_back({u, v, cap, rev_cap});
}

void FlowNetwork::add_terminal(int i, cap_t source_cap, cap_t sink_cap) {
    if (source_cap < 0 || sink_cap < 0) throw Error(ErrorCode::invalid_argument, "negative capacity");
    if (source_cap == 0 && sink_cap == 0) return;
    cap_t delta = tr_cap_[i];
    if (delta > 0) source_cap += delta;
    else sink_cap -= delta;
    tr_added_[i] += source_cap - sink_cap - delta;
    flow_ += std::min(source_cap, sink_cap);
    tr_cap_[i] = source_cap - sink_cap;
    if (trees_valid_ && !marked_[i]) {
        marked_[i] = 1;
        marked_list_.push_back(i);
    }
}

void FlowNetwork::freeze() {
    if (frozen_) return;
    const int n = node_count();
    first_.assign(n + 1, 0);
    for (const auto& e : pending_) {
        ++first_[e.u + 1];
        ++first_[e.v + 1];
    }
    for (int i = 0; i < n; ++i) first_[i + 1] += first_[i];
    const std::size_t m = 2 * pending_.size();
    if (m > static_cast<std::size_t>(std::numeric_limits<int>::max()))
        throw Error(ErrorCode::too_large, "too many arcs");
    head_.resize(m);
    sister_.resize(m);
    cap0_.resize(m);
    std::vector<int> fill(first_.begin(), first_.end() - 1);
    for (const auto& e : pending_) {
        int a = fill[e.u]++;
        int b = fill[e.v]++;
        head_[a] = e.v;
        head_[b] = e.u;
        sister_[a] = b;
        sister_[b] = a;
        cap0_[a] = e.cap;
        cap0_[b] = e.rev;
    }
    rcap_ = cap0_;
    pending_.clear();
    pending_.shrink_to_fit();
    frozen_ = true;
}

void FlowNetwork::reset() {
    freeze();
    rcap_ = cap0_;
    std::fill(tr_cap_.begin(), tr_cap_.end(), 0);
    std::fill(tr_added_.begin(), tr_added_.end(), 0);
    flow_ = 0;
    trees_valid_ = false;
    marked_.assign(tr_cap_.size(), 0);
    marked_list_.clear();
}

cap_t FlowNetwork::maxflow(FlowAlgorithm algorithm) {
    freeze();
    if (algorithm == FlowAlgorithm::bfs_augment) {
        trees_valid_ = false;
        return run_bfs_augment();
    }
    return run_search_trees();
}

namespace {

constexpr int kNone = -1;
constexpr int kTerminal = -2;
constexpr int kOrphan = -3;
constexpr int kInfDist = std::numeric_limits<int>::max();

}  // namespace

void FlowNetwork::set_active(int i) {
    if (!active_[i]) {
        active_[i] = 1;
        queue_.push_back(i);
    }
}

int FlowNetwork::next_active() {
    while (!queue_.empty()) {
        int i = queue_.front();
        queue_.pop_front();
        active_[i] = 0;
        if (parent_[i] != kNone) return i;
    }
    return kNone;
}

void FlowNetwork::augment(int middle) {
    auto& rcap = rcap_;
    cap_t b = rcap[middle];
    int i = head_[sister_[middle]];
    for (int p; (p = parent_[i]) != kTerminal; i = head_[p]) b = std::min(b, rcap[sister_[p]]);
    b = std::min(b, tr_cap_[i]);
    i = head_[middle];
    for (int p; (p = parent_[i]) != kTerminal; i = head_[p]) b = std::min(b, rcap[p]);
    b = std::min(b, -tr_cap_[i]);

    rcap[sister_[middle]] += b;
    rcap[middle] -= b;
    i = head_[sister_[middle]];
    for (int p; (p = parent_[i]) != kTerminal;) {
        rcap[p] += b;
        rcap[sister_[p]] -= b;
        int up = head_[p];
        if (rcap[sister_[p]] == 0) {
            parent_[i] = kOrphan;
            orphans_.push_front(i);
        }
        i = up;
    }
    tr_cap_[i] -= b;
    if (tr_cap_[i] == 0) {
        parent_[i] = kOrphan;
        orphans_.push_front(i);
    }
    i = head_[middle];
    for (int p; (p = parent_[i]) != kTerminal;) {
        rcap[sister_[p]] += b;
        rcap[p] -= b;
        int up = head_[p];
        if (rcap[p] == 0) {
            parent_[i] = kOrphan;
            orphans_.push_front(i);
        }
        i = up;
    }
    tr_cap_[i] += b;
    if (tr_cap_[i] == 0) {
        parent_[i] = kOrphan;
        orphans_.push_front(i);
    }
    flow_ += b;
}

void FlowNetwork::process_orphan(int i) {
    const std::uint8_t sink_side = is_sink_[i];
    int best_arc = kNone;
    int d_min = kInfDist;
    for (int a0 = first_[i]; a0 < first_[i + 1]; ++a0) {
        cap_t r = sink_side ? rcap_[a0] : rcap_[sister_[a0]];
        if (r == 0) continue;
        int j = head_[a0];
        if (is_sink_[j] != sink_side || parent_[j] == kNone) continue;
        int d = 0;
        for (;;) {
            if (ts_[j] == time_) {
                d += dist_[j];
                break;
            }
            int a = parent_[j];
            ++d;
            if (a == kTerminal) {
                ts_[j] = time_;
                dist_[j] = 1;
                break;
            }
            if (a == kOrphan) {
                d = kInfDist;
                break;
            }
            j = head_[a];
        }
        if (d < kInfDist) {
            if (d < d_min) {
                best_arc = a0;
                d_min = d;
            }
            for (j = head_[a0]; ts_[j] != time_; j = head_[parent_[j]]) {
                ts_[j] = time_;
                dist_[j] = d--;
            }
        }
    }
    parent_[i] = best_arc;
    if (best_arc != kNone) {
        ts_[i] = time_;
        dist_[i] = d_min + 1;
        return;
    }
    for (int a0 = first_[i]; a0 < first_[i + 1]; ++a0) {
        int j = head_[a0];
        int a = parent_[j];
        if (is_sink_[j] != sink_side || a == kNone) continue;
        cap_t r = sink_side ? rcap_[a0] : rcap_[sister_[a0]];
        if (r > 0) set_active(j);
        if (a != kTerminal && a != kOrphan && head_[a] == i) {
            parent_[j] = kOrphan;
            orphans_.push_back(j);
        }
    }
}

// Terminal capacities changed at the marked nodes since the last solve.
// Re-root those nodes in the tree their new residual points to and orphan
// whatever hung below them on the wrong side.
void FlowNetwork::reuse_trees() {
    ++time_;
    for (int i : marked_list_) {
        marked_[i] = 0;
        set_active(i);
        if (tr_cap_[i] == 0) {
            if (parent_[i] != kNone) {
                parent_[i] = kOrphan;
                orphans_.push_back(i);
            }
            continue;
        }
        const std::uint8_t to_sink = tr_cap_[i] < 0;
        if (parent_[i] == kNone || is_sink_[i] != to_sink) {
            is_sink_[i] = to_sink;
            for (int a = first_[i]; a < first_[i + 1]; ++a) {
                int j = head_[a];
                if (marked_[j]) continue;
                if (parent_[j] == sister_[a]) {
                    parent_[j] = kOrphan;
                    orphans_.push_back(j);
                }
                if (parent_[j] != kNone && parent_[j] != kOrphan && is_sink_[j] != to_sink) {
                    cap_t r = to_sink ? rcap_[sister_[a]] : rcap_[a];
                    if (r > 0) set_active(j);
                }
            }
        }
        parent_[i] = kTerminal;
        ts_[i] = time_;
        dist_[i] = 1;
    }
    marked_list_.clear();
    while (!orphans_.empty()) {
        int o = orphans_.front();
        orphans_.pop_front();
        process_orphan(o);
    }
}

// Two search trees grown from the terminals; paths found where they touch
// are augmented, and the nodes cut off by saturation are re-attached or
// freed. Distance and timestamp labels bias re-attachment toward short paths.
cap_t FlowNetwork::run_search_trees() {
    const int n = node_count();
    if (!trees_valid_) {
        parent_.assign(n, kNone);
        ts_.assign(n, 0);
        dist_.assign(n, 0);
        is_sink_.assign(n, 0);
        active_.assign(n, 0);
        queue_.clear();
        orphans_.clear();
        marked_.assign(n, 0);
        marked_list_.clear();
        time_ = 0;
        for (int i = 0; i < n; ++i) {
            if (tr_cap_[i] != 0) {
                is_sink_[i] = tr_cap_[i] < 0;
                parent_[i] = kTerminal;
                dist_[i] = 1;
                set_active(i);
            }
        }
        trees_valid_ = true;
    } else {
        reuse_trees();
    }

    int current = kNone;
    for (;;) {
        int i = current;
        if (i != kNone) {
            active_[i] = 0;
            if (parent_[i] == kNone) i = kNone;
        }
        if (i == kNone) {
            i = next_active();
            if (i == kNone) break;
        }

        int found = kNone;
        if (!is_sink_[i]) {
            for (int a = first_[i]; a < first_[i + 1]; ++a) {
                if (rcap_[a] == 0) continue;
                int j = head_[a];
                if (parent_[j] == kNone) {
                    is_sink_[j] = 0;
                    parent_[j] = sister_[a];
                    ts_[j] = ts_[i];
                    dist_[j] = dist_[i] + 1;
                    set_active(j);
                } else if (is_sink_[j]) {
                    found = a;
                    break;
                } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                    parent_[j] = sister_[a];
                    ts_[j] = ts_[i];
                    dist_[j] = dist_[i] + 1;
                }
            }
        } else {
            for (int a = first_[i]; a < first_[i + 1]; ++a) {
                if (rcap_[sister_[a]] == 0) continue;
                int j = head_[a];
                if (parent_[j] == kNone) {
                    is_sink_[j] = 1;
                    parent_[j] = sister_[a];
                    ts_[j] = ts_[i];
                    dist_[j] = dist_[i] + 1;
                    set_active(j);
                } else if (!is_sink_[j]) {
                    found = sister_[a];
                    break;
                } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                    parent_[j] = sister_[a];
                    ts_[j] = ts_[i];
                    dist_[j] = dist_[i] + 1;
                }
            }
        }

        ++time_;
        if (found != kNone) {
            // Keep expanding from i next round; the flag keeps it out of the queue.
            active_[i] = 1;
            current = i;
            augment(found);
            while (!orphans_.empty()) {
                int o = orphans_.front();
                orphans_.pop_front();
                process_orphan(o);
            }
        } else {
            current = kNone;
        }
    }
    return flow_;
}

cap_t FlowNetwork::run_bfs_augment() {
    const int n = node_count();
    std::vector<int> pred(n);
    std::vector<int> queue;
    queue.reserve(n);
    for (;;) {
        std::fill(pred.begin(), pred.end(), kNone);
        queue.clear();
        for (int i = 0; i < n; ++i)
            if (tr_cap_[i] > 0) {
                pred[i] = kTerminal;
                queue.push_back(i);
            }
        int end = kNone;
        for (std::size_t q = 0; q < queue.size() && end == kNone; ++q) {
            int i = queue[q];
            if (tr_cap_[i] < 0) {
                end = i;
                break;
            }
            for (int a = first_[i]; a < first_[i + 1]; ++a) {
                int j = head_[a];
                if (rcap_[a] > 0 && pred[j] == kNone) {
                    pred[j] = a;
                    queue.push_back(j);
                }
            }
        }
        if (end == kNone) break;
        cap_t b = -tr_cap_[end];
        int i = end;
        while (pred[i] != kTerminal) {
            b = std::min(b, rcap_[pred[i]]);
            i = head_[sister_[pred[i]]];
        }
        b = std::min(b, tr_cap_[i]);
        tr_cap_[i] -= b;
        i = end;
        while (pred[i] != kTerminal) {
            rcap_[pred[i]] -= b;
            rcap_[sister_[pred[i]]] += b;
            i = head_[sister_[pred[i]]];
        }
        tr_cap_[end] += b;
        flow_ += b;
    }
    return flow_;
}

std::vector<std::uint8_t> FlowNetwork::source_reachable() const {
    const int n = node_count();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (tr_cap_[i] > 0) {
            seen[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        if (!frozen_) continue;
        for (int a = first_[i]; a < first_[i + 1]; ++a) {
            int j = head_[a];
            if (rcap_[a] > 0 && !seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

std::vector<std::uint8_t> FlowNetwork::not_reaching_sink() const {
    const int n = node_count();
    std::vector<std::uint8_t> reach(n, 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i)
        if (tr_cap_[i] < 0) {
            reach[i] = 1;
            stack.push_back(i);
        }
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        if (!frozen_) continue;
        for (int a = first_[i]; a < first_[i + 1]; ++a) {
            int j = head_[a];
            if (rcap_[sister_[a]] > 0 && !reach[j]) {
                reach[j] = 1;
                stack.push_back(j);
            }
        }
    }
    for (auto& r : reach) r = static_cast<std::uint8_t>(1 - r);
    return reach;
}

void FlowNetwork::dump(std::ostream& out) const {
    out << "p " << node_count() << ' ' << arc_count() << '\n';
    if (frozen_) {
        for (int i = 0; i < node_count(); ++i)
            for (int a = first_[i]; a < first_[i + 1]; ++a) out << "a " << i << ' ' << head_[a] << ' ' << rcap_[a] << '\n';
    } else {
        for (const auto& e : pending_) {
            out << "a " << e.u << ' ' << e.v << ' ' << e.cap << '\n';
            out << "a " << e.v << ' ' << e.u << ' ' << e.rev << '\n';
        }
    }
    for (int i = 0; i < node_count(); ++i)
        if (tr_cap_[i] != 0) out << "t " << i << ' ' << tr_cap_[i] << '\n';
}

bool FlowNetwork::check_flow_conservation() const {
    if (!frozen_) return true;
    for (int i = 0; i < node_count(); ++i) {
        cap_t out = 0;
        for (int a = first_[i]; a < first_[i + 1]; ++a) {
            if (rcap_[a] < 0) return false;
            out += cap0_[a] - rcap_[a];
        }
        if (tr_added_[i] - tr_cap_[i] != out) return false;
    }
    return true;
}

}  // namespace oscflow
