#pragma once

#include <limits>
#include <optional>

#include "oscflow/grid.hpp"
#include "oscflow/profile.hpp"

namespace oscflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    double norm() const;
};

double dot(Vec2 a, Vec2 b);

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double quad(Vec2 v) const { return v.x * (xx * v.x + xy * v.y) + v.y * (xy * v.x + yy * v.y); }
};

/// Distance queries for a closed set K: dist(y, K) is 0 on K, dist(y, K^c)
/// is 0 outside the interior of K.
class SetQuery {
public:
    virtual ~SetQuery() = default;
    virtual double dist_to_set(Vec2 y) const = 0;
    virtual double dist_to_complement(Vec2 y) const = 0;
};

enum class ShapeKind { disk, halfplane, rectangle, full_plane, empty };

/// Closed-form sets with exact distances, normals and curvature.
class SmoothSetDescriptor : public SetQuery {
public:
    static SmoothSetDescriptor disk(Vec2 center, double radius);
    /// {y : n . y <= offset}, n normalized on construction.
    static SmoothSetDescriptor halfplane(Vec2 normal, double offset);
    /// Axis-aligned, centered at `center`, sides `width` (x) and `height` (y).
    static SmoothSetDescriptor rectangle(double width, double height, Vec2 center = {});
    static SmoothSetDescriptor full_plane();
    static SmoothSetDescriptor empty();

    ShapeKind kind() const { return kind_; }
    /// Negative inside.
    double signed_distance(Vec2 y) const;
    double dist_to_set(Vec2 y) const override;
    double dist_to_complement(Vec2 y) const override;
    Vec2 outward_normal(Vec2 x) const;
    /// Curvature of the boundary at x, positive for convex sets.
    double curvature(Vec2 x) const;

private:
    ShapeKind kind_ = ShapeKind::empty;
    Vec2 center_;
    Vec2 normal_;
    double a_ = 0.0;  // radius, offset, or half width
    double b_ = 0.0;  // half height
};

/// Superlevel set {u >= level} of a sampled field; distances between cell
/// centers, so exact only up to one cell.
class GridSuperlevelQuery : public SetQuery {
public:
    GridSuperlevelQuery(const ScalarField& field, double level);
    double dist_to_set(Vec2 y) const override;
    double dist_to_complement(Vec2 y) const override;

private:
    double nearest(Vec2 y, bool in_set) const;
    const ScalarField* field_;
    double level_;
};

struct KappaS {
    double plus = 0.0;
    double minus = 0.0;
    /// Some activation test sits exactly on its threshold; the *_alt values
    /// are the other one-sided choice.
    bool degenerate = false;
    double plus_alt = 0.0;
    double minus_alt = 0.0;

    double sum() const { return plus + minus; }
};

KappaS kappa_s(const SmoothSetDescriptor& set, Vec2 x, double s);

struct KappaF {
    double value = 0.0;
    /// The inward or outward activation switches inside the profile support.
    bool degenerate = false;
    double switch_radius = std::numeric_limits<double>::quiet_NaN();
};

KappaF kappa_f(const SmoothSetDescriptor& set, Vec2 x, const WeightProfile& profile);

struct HamiltonianArgs {
    Vec2 x;
    Vec2 p;
    Mat2 X;
    const SetQuery* K = nullptr;
};

double hamiltonian_F_s(const HamiltonianArgs& args, double s);
double hamiltonian_F_f(const HamiltonianArgs& args, const WeightProfile& profile);
/// Activation indicators replaced by H_eps(t) = clamp((t + eps) / eps, 0, 1).
double hamiltonian_F_eps(const HamiltonianArgs& args, double s, double eps);
double hamiltonian_F_f_eps(const HamiltonianArgs& args, const WeightProfile& profile, double eps);

double ramp_H(double t, double eps);

struct LevelSetStepOptions {
    double eps = 0.5;
    /// Only cells with |u| <= band are updated; the rest are copied.
    double band = std::numeric_limits<double>::infinity();
    /// Slack added to grid activation margins.
    double tolerance_cells = 1.0;
};

/// Forward Euler u <- u - dt * F_eps(x, Du, D^2u, {u >= u(x)}) with central
/// differences. Cells with |Du| < 1e-8 are frozen. Throws cfl_violation when
/// dt > 0.25 spacing^2 min|Du| / sup|F| over the updated cells.
ScalarField explicit_levelset_step(const ScalarField& u, double dt, const WeightProfile& profile,
                                   const LevelSetStepOptions& options = {});
ScalarField explicit_levelset_step(const ScalarField& u, double dt, double s, double eps);

/// Largest dt the CFL rule allows for this field (infinite when nothing moves).
double explicit_levelset_max_dt(const ScalarField& u, const WeightProfile& profile, const LevelSetStepOptions& options = {});

}  // namespace oscflow
