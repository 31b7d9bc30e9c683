#include "oscflow/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "oscflow/error.hpp"
#include "oscflow/parallel.hpp"

namespace oscflow {

double Vec2::norm() const { return std::hypot(x, y); }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tol_for(double s) { return 1e-9 * std::max(1.0, s); }

}  // namespace

SmoothSetDescriptor SmoothSetDescriptor::disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "disk radius must be positive");
    SmoothSetDescriptor d;
    d.kind_ = ShapeKind::disk;
    d.center_ = center;
    d.a_ = radius;
    return d;
}

SmoothSetDescriptor SmoothSetDescriptor::halfplane(Vec2 normal, double offset) {
    double n = normal.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::invalid_argument, "halfplane normal must be nonzero");
    SmoothSetDescriptor d;
    d.kind_ = ShapeKind::halfplane;
    d.normal_ = (1.0 / n) * normal;
    d.a_ = offset / n;
    return d;
}

SmoothSetDescriptor SmoothSetDescriptor::rectangle(double width, double height, Vec2 center) {
    if (!(width > 0.0) || !(height > 0.0)) throw Error(ErrorCode::invalid_argument, "rectangle sides must be positive");
    SmoothSetDescriptor d;
    d.kind_ = ShapeKind::rectangle;
    d.center_ = center;
    d.a_ = 0.5 * width;
    d.b_ = 0.5 * height;
    return d;
}

SmoothSetDescriptor SmoothSetDescriptor::full_plane() {
    SmoothSetDescriptor d;
    d.kind_ = ShapeKind::full_plane;
    return d;
}

SmoothSetDescriptor SmoothSetDescriptor::empty() { return {}; }

double SmoothSetDescriptor::signed_distance(Vec2 y) const {
    switch (kind_) {
        case ShapeKind::disk: return (y - center_).norm() - a_;
        case ShapeKind::halfplane: return dot(normal_, y) - a_;
        case ShapeKind::rectangle: {
            double qx = std::abs(y.x - center_.x) - a_, qy = std::abs(y.y - center_.y) - b_;
            double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
            return outside + std::min(std::max(qx, qy), 0.0);
        }
        case ShapeKind::full_plane: return -kInf;
        case ShapeKind::empty: return kInf;
    }
    return kInf;
}

double SmoothSetDescriptor::dist_to_set(Vec2 y) const { return std::max(signed_distance(y), 0.0); }
double SmoothSetDescriptor::dist_to_complement(Vec2 y) const { return std::max(-signed_distance(y), 0.0); }

Vec2 SmoothSetDescriptor::outward_normal(Vec2 x) const {
    switch (kind_) {
        case ShapeKind::disk: {
            Vec2 v = x - center_;
            return (1.0 / v.norm()) * v;
        }
        case ShapeKind::halfplane: return normal_;
        case ShapeKind::rectangle: {
            double qx = std::abs(x.x - center_.x) - a_, qy = std::abs(x.y - center_.y) - b_;
            if (std::abs(qx) <= std::abs(qy)) return {x.x >= center_.x ? 1.0 : -1.0, 0.0};
            return {0.0, x.y >= center_.y ? 1.0 : -1.0};
        }
        default: throw Error(ErrorCode::domain, "set has no boundary");
    }
}

double SmoothSetDescriptor::curvature(Vec2) const {
    switch (kind_) {
        case ShapeKind::disk: return 1.0 / a_;
        case ShapeKind::halfplane:
        case ShapeKind::rectangle: return 0.0;
        default: throw Error(ErrorCode::domain, "set has no boundary");
    }
}

GridSuperlevelQuery::GridSuperlevelQuery(const ScalarField& field, double level) : field_(&field), level_(level) {}

double GridSuperlevelQuery::nearest(Vec2 y, bool in_set) const {
    const Grid2D& g = field_->grid();
    const double h = g.spacing();
    double best = kInf;
    for (int j = 0; j < g.height(); ++j) {
        const double dy = j * h - y.y;
        if (dy * dy >= best * best) continue;
        for (int i = 0; i < g.width(); ++i) {
            if ((field_->at(i, j) >= level_) != in_set) continue;
            double d = std::hypot(i * h - y.x, dy);
            best = std::min(best, d);
        }
    }
    return best;
}

double GridSuperlevelQuery::dist_to_set(Vec2 y) const { return nearest(y, true); }
double GridSuperlevelQuery::dist_to_complement(Vec2 y) const { return nearest(y, false); }

namespace {

bool plus_active(const SmoothSetDescriptor& set, Vec2 x, Vec2 nu, double s) {
    return set.dist_to_set(x + s * nu) - s >= -tol_for(s);
}

bool minus_active(const SmoothSetDescriptor& set, Vec2 x, Vec2 nu, double s) {
    return set.dist_to_complement(x - s * nu) - s >= -tol_for(s);
}

void require_boundary(const SmoothSetDescriptor& set, Vec2 x) {
    double sd = set.signed_distance(x);
    if (!std::isfinite(sd) || std::abs(sd) > 1e-9 * std::max(1.0, x.norm()))
        throw Error(ErrorCode::domain, "point is not on the boundary");
}

}  // namespace

KappaS kappa_s(const SmoothSetDescriptor& set, Vec2 x, double s) {
    if (!(s > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
    require_boundary(set, x);
    const Vec2 nu = set.outward_normal(x);
    const double k = set.curvature(x);
    const double vp = (1.0 + s * k) / (2.0 * s);
    const double vm = -(1.0 - s * k) / (2.0 * s);
    KappaS r;
    const bool ap = plus_active(set, x, nu, s), am = minus_active(set, x, nu, s);
    r.plus = ap ? vp : 0.0;
    r.minus = am ? vm : 0.0;
    r.plus_alt = r.plus;
    r.minus_alt = r.minus;
    // A switch of either activation right at s makes the value one-sided.
    const double ds = 1e-6 * s;
    if (plus_active(set, x, nu, s - ds) != plus_active(set, x, nu, s + ds)) {
        r.degenerate = true;
        r.plus_alt = ap ? 0.0 : vp;
    }
    if (minus_active(set, x, nu, s - ds) != minus_active(set, x, nu, s + ds)) {
        r.degenerate = true;
        r.minus_alt = am ? 0.0 : vm;
    }
    return r;
}

KappaF kappa_f(const SmoothSetDescriptor& set, Vec2 x, const WeightProfile& profile) {
    KappaF r;
    for (const auto& q : profile.quadrature) r.value += q.w * kappa_s(set, x, q.s).sum();

    const Vec2 nu = set.outward_normal(x);
    auto state = [&](double s) { return 2 * plus_active(set, x, nu, s) + minus_active(set, x, nu, s); };
    const double lo = profile.delta_inner, hi = profile.rho0;
    if (lo < hi && state(lo) != state(hi)) {
        double a = lo, b = hi;
        const int sa = state(a);
        for (int it = 0; it < 100; ++it) {
            double m = 0.5 * (a + b);
            if (state(m) == sa) a = m;
            else b = m;
        }
        r.degenerate = true;
        r.switch_radius = 0.5 * (a + b);
    }
    return r;
}

double ramp_H(double t, double eps) { return std::clamp((t + eps) / eps, 0.0, 1.0); }

namespace {

struct Branches {
    double plus_value, minus_value;  // values with the activation on
    double plus_margin, minus_margin;
};

Branches branches(const HamiltonianArgs& a, double s) {
    if (!(s > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
    if (a.K == nullptr) throw Error(ErrorCode::invalid_argument, "missing set query");
    const double np = a.p.norm();
    if (!(np > 0.0)) throw Error(ErrorCode::singular_gradient, "gradient vanishes");
    const Vec2 ph = (1.0 / np) * a.p;
    const Vec2 tau{-ph.y, ph.x};
    const double q = a.X.quad(tau);
    Branches b;
    b.plus_value = np / (2.0 * s) * std::max(1.0 - s / np * q, 0.0);
    b.minus_value = -np / (2.0 * s) * std::max(1.0 + s / np * q, 0.0);
    b.plus_margin = a.K->dist_to_set(a.x - s * ph) - s;
    b.minus_margin = a.K->dist_to_complement(a.x + s * ph) - s;
    return b;
}

}  // namespace

double hamiltonian_F_s(const HamiltonianArgs& args, double s) {
    auto b = branches(args, s);
    const double tol = tol_for(s);
    return (b.plus_margin >= -tol ? b.plus_value : 0.0) + (b.minus_margin >= -tol ? b.minus_value : 0.0);
}

double hamiltonian_F_f(const HamiltonianArgs& args, const WeightProfile& profile) {
    double total = 0.0;
    for (const auto& q : profile.quadrature) total += q.w * hamiltonian_F_s(args, q.s);
    return total;
}

double hamiltonian_F_eps(const HamiltonianArgs& args, double s, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
    auto b = branches(args, s);
    return ramp_H(b.plus_margin, eps) * b.plus_value + ramp_H(b.minus_margin, eps) * b.minus_value;
}

double hamiltonian_F_f_eps(const HamiltonianArgs& args, const WeightProfile& profile, double eps) {
    double total = 0.0;
    for (const auto& q : profile.quadrature) total += q.w * hamiltonian_F_eps(args, q.s, eps);
    return total;
}

namespace {

struct CellDerivatives {
    Vec2 p;
    Mat2 X;
    bool interior = false;
};

CellDerivatives derivatives(const ScalarField& u, int i, int j) {
    const Grid2D& g = u.grid();
    CellDerivatives d;
    if (i <= 0 || j <= 0 || i + 1 >= g.width() || j + 1 >= g.height()) return d;
    const double h = g.spacing();
    const double c = u.at(i, j);
    d.p = {(u.at(i + 1, j) - u.at(i - 1, j)) / (2 * h), (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * h)};
    d.X.xx = (u.at(i + 1, j) - 2 * c + u.at(i - 1, j)) / (h * h);
    d.X.yy = (u.at(i, j + 1) - 2 * c + u.at(i, j - 1)) / (h * h);
    d.X.xy = (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) + u.at(i - 1, j - 1)) / (4 * h * h);
    d.interior = true;
    return d;
}

// Grid margins get `slack` added: sampled distances are only good to a cell.
double grid_F(const ScalarField& u, int i, int j, const CellDerivatives& d, const WeightProfile& profile,
              const LevelSetStepOptions& opt) {
    const double h = u.grid().spacing();
    GridSuperlevelQuery K(u, u.at(i, j));
    HamiltonianArgs a{{i * h, j * h}, d.p, d.X, &K};
    const double slack = opt.tolerance_cells * h;
    double total = 0.0;
    for (const auto& q : profile.quadrature) {
        auto b = branches(a, q.s);
        total += q.w * (ramp_H(b.plus_margin + slack, opt.eps) * b.plus_value +
                        ramp_H(b.minus_margin + slack, opt.eps) * b.minus_value);
    }
    return total;
}

struct StepPlan {
    std::vector<int> cells;
    std::vector<double> F;
    double min_grad = kInf;
    double sup_F = 0.0;
};

StepPlan plan_step(const ScalarField& u, const WeightProfile& profile, const LevelSetStepOptions& opt) {
    if (!(opt.eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
    const Grid2D& g = u.grid();
    StepPlan plan;
    std::vector<CellDerivatives> ders;
    for (int j = 0; j < g.height(); ++j)
        for (int i = 0; i < g.width(); ++i) {
            if (std::abs(u.at(i, j)) > opt.band) continue;
            auto d = derivatives(u, i, j);
            if (!d.interior || d.p.norm() < 1e-8) continue;
            plan.cells.push_back(g.index({i, j}));
            ders.push_back(d);
        }
    plan.F.resize(plan.cells.size());
    parallel_for(plan.cells.size(), [&](std::size_t k) {
        Cell c = g.cell(plan.cells[k]);
        plan.F[k] = grid_F(u, c.x, c.y, ders[k], profile, opt);
    });
    for (std::size_t k = 0; k < plan.cells.size(); ++k) {
        plan.min_grad = std::min(plan.min_grad, ders[k].p.norm());
        plan.sup_F = std::max(plan.sup_F, std::abs(plan.F[k]));
    }
    return plan;
}

double max_dt(const StepPlan& plan, double spacing) {
    if (plan.cells.empty() || plan.sup_F == 0.0) return kInf;
    return 0.25 * spacing * spacing * plan.min_grad / plan.sup_F;
}

}  // namespace

double explicit_levelset_max_dt(const ScalarField& u, const WeightProfile& profile, const LevelSetStepOptions& options) {
    return max_dt(plan_step(u, profile, options), u.grid().spacing());
}

ScalarField explicit_levelset_step(const ScalarField& u, double dt, const WeightProfile& profile,
                                   const LevelSetStepOptions& options) {
    if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
    auto plan = plan_step(u, profile, options);
    if (dt > max_dt(plan, u.grid().spacing())) throw Error(ErrorCode::cfl_violation, "dt exceeds the CFL bound");
    std::vector<double> out(u.values().begin(), u.values().end());
    for (std::size_t k = 0; k < plan.cells.size(); ++k) out[plan.cells[k]] -= dt * plan.F[k];
    return {u.grid(), std::move(out)};
}

ScalarField explicit_levelset_step(const ScalarField& u, double dt, double s, double eps) {
    LevelSetStepOptions opt;
    opt.eps = eps;
    return explicit_levelset_step(u, dt, make_single_radius_profile(s), opt);
}

}  // namespace oscflow
