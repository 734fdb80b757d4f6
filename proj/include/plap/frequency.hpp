#pragma once

#include "plap/field.hpp"
#include "plap/geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace plap {

// The radius profiles live in the plane; every formula keeps the dimension as
// a named constant so the general-n exponents stay visible.
inline constexpr int kDim = 2;

/// Boundary p-mass I(r): integral of |u|^p over the circle of radius r.
double boundary_I(const FieldSampler& field, double p, Vec2 center, double r, int n_theta);

/// Bulk p-Dirichlet energy D(r): integral of |grad u|^p over the disc (or,
/// with r_inner > 0, the annulus) around `center`.
double bulk_D(const FieldSampler& field, double p, Vec2 center, double r, int n_theta,
              double r_inner = 0.0);

/// Bulk p-mass: integral of |u|^p over the disc of radius r.
double bulk_mass(const FieldSampler& field, double p, Vec2 center, double r, int n_theta);

/// Frequency r^exponent * D(r) / I(r); empty when I(r) sits below the
/// scale-aware zero threshold. The default exponent is the plain radius
/// weight; other growth weights are exposed for experimentation only.
std::optional<double> frequency_F(const FieldSampler& field, double p, Vec2 center, double r,
                                  int n_theta, double radius_exponent = 1.0);

/// Derivative of I(r) via the sign-split boundary formula
///   (n-1)/r I(r) + p * integral of |u|^(p-1) sign(u) u_nu dS.
double I_prime_formula(const FieldSampler& field, double p, Vec2 center, double r, int n_theta);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// I'(r) <= (n-1)/r I(r) + p * integral of |u|^(p-1)|u_nu| dS,
/// with rounding slack 1e-8 * scale.
InequalityCheck I_prime_bound_check(const FieldSampler& field, double p, Vec2 center, double r,
                                    int n_theta);

struct IdentityRow {
    double r = 0.0;
    double left = 0.0;   // bulk p-Dirichlet energy
    double right = 0.0;  // boundary flux moment |grad u|^(p-2) u u_nu
    double residual = 0.0;
};

/// Residual of the energy identity
///   integral_{B_r} |grad u|^p = integral_{boundary} |grad u|^(p-2) u u_nu dS
/// for p-harmonic fields. With r_inner > 0 both sides are taken over the
/// annulus (the inner flux moment enters with a minus sign), which covers
/// solutions with a singularity inside the hole.
IdentityRow energy_identity_residual(const FieldSampler& field, double p, Vec2 center, double r,
                                     int n_theta, double r_inner = 0.0);

/// p * D(r) <= (p-1) * integral |grad u|^p dS + I(r), with 1% slack on the
/// right-hand side for discretization error.
InequalityCheck grad_estimate_check(const FieldSampler& field, double p, Vec2 center, double r,
                                    int n_theta);

/// Sampled radius profile of I, D, F and I'. F carries a defined-flag per
/// radius; M is the maximum of the defined F values (NaN when none are).
struct FrequencyProfile {
    double p = 2.0;
    Vec2 center{};
    int n_theta = 256;
    std::vector<double> radii;
    std::vector<double> I;
    std::vector<double> D;
    std::vector<double> F;
    std::vector<std::uint8_t> F_defined;
    std::vector<double> Iprime;
    double M = 0.0;

    bool all_F_defined() const;
};

/// Uniform grid of `count` radii on (r_b, R_b].
FrequencyProfile compute_profile(const FieldSampler& field, double p, Vec2 center, double r_b,
                                 double R_b, int count, int n_theta);

struct DoublingReport {
    double p = 2.0;
    double M = 0.0;
    double eps0 = 0.0;   // 1 / (4 p M)
    double r0 = 0.0;     // largest radius with both smallness conditions <= 1/4
    double r_star = 0.0; // argmax of I on the window up to r0
    double max_ratio = 0.0;
    bool pass = false;
    std::vector<double> window_radii; // radii up to r_star
    std::vector<double> ratios;       // I(r_star) / I(r) per window radius
};

/// Window scan for the weak doubling property: picks eps0 = 1/(4pM), finds the
/// largest r0 whose pairwise log and Young-integral conditions stay below 1/4,
/// takes r_star = argmax I on [start, r0], and checks I(r_star) <= 4 I(r) for
/// every window radius. Throws when F is undefined anywhere in the profile.
DoublingReport doubling_scan(const FrequencyProfile& profile);

/// Largest scanned radius whose circle carries max |u| <= tol; 0 when none.
double vanishing_radius(const FieldSampler& field, Vec2 center, std::span<const double> radii,
                        int n_theta, double tol);

/// D(r) (rho - r)^p / integral_{B_rho} |u|^p : empirical Caccioppoli constant.
double caccioppoli_ratio(const FieldSampler& field, double p, Vec2 center, double r, double rho,
                         int n_theta);

struct ConditionProbes {
    double A1 = 0.0; // surface gradient mass / surface value mass
    double A2 = 0.0; // bulk value mass / (r * surface value mass)
};

ConditionProbes condition_probes(const FieldSampler& field, double p, Vec2 center, double r,
                                 int n_theta);

struct PoincareProbe {
    double gamma_hat = 0.0; // area fraction of the near-zero set
    double C_hat = 0.0;     // bulk |u|^p / (r^p D(r))
};

/// `zero_tol` <= 0 selects an amplitude-aware default.
PoincareProbe poincare_probe(const FieldSampler& field, double p, Vec2 center, double r,
                             int n_theta, double zero_tol = 0.0);

struct ConvexityProbe {
    std::vector<double> radii;
    std::vector<std::uint8_t> bulk_convex;        // second differences of the bulk square mass
    std::vector<std::uint8_t> surface_convex;     // second differences of the surface square mass
    std::vector<std::uint8_t> surface_over_r_up;  // first differences of S(r)/r
    bool all_pass = false;
};

/// Quadratic-growth probes for harmonic fields (the p = 2 case only).
ConvexityProbe convexity_probe(const FieldSampler& field, Vec2 center,
                               std::span<const double> radii, int n_theta);

} // namespace plap
