#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <vector>

namespace oscflow {

using cap_t = std::int64_t;

enum class FlowAlgorithm { search_trees, bfs_augment };

/// Directed flow network with integer capacities and implicit source/sink
/// terminals. Edges are collected first and compacted into CSR form on the
/// first solve; after that the topology is frozen and only capacities may
/// be reset.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes = 0);

    int add_nodes(int count);
    int node_count() const { return static_cast<int>(tr_cap_.size()); }
    std::size_t arc_count() const { return frozen_ ? head_.size() : 2 * pending_.size(); }

    /// Adds u->v with capacity `cap` and v->u with `rev_cap`.
    void add_edge(int u, int v, cap_t cap, cap_t rev_cap = 0);
    /// Source->i and i->sink capacities. Netted immediately; the common part
    /// is counted as flow that is already pushed. May be called between
    /// solves: the next search-tree solve then continues from the current flow.
    void add_terminal(int i, cap_t source_cap, cap_t sink_cap);

    /// Restore every edge to its construction capacity, clear terminals and
    /// the flow value.
    void reset();

    cap_t maxflow(FlowAlgorithm algorithm = FlowAlgorithm::search_trees);
    cap_t flow() const { return flow_; }

    /// Source side of the minimal cut (residual reachability from the source).
    std::vector<std::uint8_t> source_reachable() const;
    /// Complement of the nodes that still reach the sink: the maximal source side.
    std::vector<std::uint8_t> not_reaching_sink() const;

    /// Plain-text dump, one line per arc: `a <from> <to> <residual>`, plus
    /// `t <node> <terminal residual>` lines (positive = from source).
    void dump(std::ostream& out) const;

    /// Consistency of the current residual state: conservation at every node
    /// and nonnegative residuals. Used by tests.
    bool check_flow_conservation() const;

private:
    void freeze();
    cap_t run_search_trees();
    cap_t run_bfs_augment();
    void reuse_trees();
    void set_active(int i);
    int next_active();
    void augment(int middle);
    void process_orphan(int i);

    struct Pending {
        int u, v;
        cap_t cap, rev;
    };
    std::vector<Pending> pending_;
    bool frozen_ = false;

    // CSR arcs grouped by tail.
    std::vector<int> first_;  // node -> first arc, size n+1
    std::vector<int> head_;
    std::vector<int> sister_;
    std::vector<cap_t> rcap_;
    std::vector<cap_t> cap0_;

    std::vector<cap_t> tr_cap_;  // > 0: residual from source, < 0: residual to sink
    std::vector<cap_t> tr_added_;  // net source-minus-sink capacity added per node
    cap_t flow_ = 0;

    // Search-tree state, kept between solves.
    bool trees_valid_ = false;
    std::vector<int> parent_;
    std::vector<int> ts_;
    std::vector<int> dist_;
    std::vector<std::uint8_t> is_sink_;
    std::vector<std::uint8_t> active_;
    std::vector<std::uint8_t> marked_;
    std::vector<int> marked_list_;
    std::deque<int> queue_;
    std::deque<int> orphans_;
    int time_ = 0;
};

}  // namespace oscflow
