#pragma once

#include "plap/exact.hpp"
#include "plap/geometry.hpp"

#include <functional>
#include <span>
#include <vector>

namespace plap {

/// Twice-differentiable field given by callables. Consumers assume the
/// Hessian is symmetric at every query point.
struct C2Field {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;
    std::function<Sym2(Vec2)> hessian;
};

C2Field c2_field(const ExactSolution& sol);

/// Nondivergence-form residual |grad u|^2 lap(u) + (p-2) u_i u_j u_ij.
double p_laplace_residual(const C2Field& u, double p, Vec2 x);

/// The quadratic form |alpha|^2 |xi|^2 + (p-2)(alpha . xi)^2. Sandwiched
/// between min(1, p-1) |alpha|^2 |xi|^2 and max(1, p-1) |alpha|^2 |xi|^2.
double quadratic_form(Vec2 alpha, Vec2 xi, double p);

struct EllipticityBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

/// Exact eigenvalue range of the principal matrix |alpha|^2 I + (p-2) a a^T:
/// (min(1, p-1)|alpha|^2, max(1, p-1)|alpha|^2). Throws for alpha = 0.
EllipticityBounds ellipticity_bounds(Vec2 alpha, double p);

/// |alpha|^2 I + (p-2) alpha alpha^T.
Sym2 principal_matrix(Vec2 alpha, double p);

/// The grouped lower-order remainder of the expansion around slope alpha:
///   R = |grad h|^2 lap(h) + 2 (grad h . alpha) lap(h)
///     + (p-2) (h_i h_j h_ij + 2 (grad h . H alpha))
double grouped_remainder(const C2Field& h, Vec2 alpha, double p, Vec2 x);

/// Drift coefficients b with b . grad h = R pointwise: b = R grad h / |grad h|^2
/// where the gradient does not vanish, otherwise 0 (R vanishes there too,
/// since every term of R carries a factor of grad h).
Vec2 drift_coefficients(const C2Field& h, Vec2 alpha, double p, Vec2 x);

/// Constant-coefficient principal part plus the drift field for the
/// difference h = u - L against an affine slope alpha.
struct AffineLinearization {
    Vec2 alpha{};
    double p = 2.0;
    Sym2 principal{};
    std::function<Vec2(Vec2)> drift;
};

AffineLinearization linearize_at_affine(const C2Field& u, const ExactSolution& affine_L, double p);

/// Max over samples of |alpha|^2 lap(h) + (p-2) a_i a_j h_ij + b . grad h with
/// h = u - L; vanishes whenever u solves the nondivergence equation.
double residual_affine_linearization(const C2Field& u, const ExactSolution& affine_L, double p,
                                     std::span<const Vec2> samples);

struct TwoSolutionCheck {
    double max_residual = 0.0;
    std::vector<int> flagged; // sample indices where grad v vanishes
};

/// Residual of the two-solution difference equation for h = u - v:
///   |grad v|^2 lap(h) + (p-2) v_i v_j h_ij + ((grad v + grad u) . grad h) lap(u)
///   + (p-2) u_ij (v_i h_j + u_j h_i).
/// Equal to the difference of the two nondivergence residuals; vanishes when
/// both fields solve the equation. Samples with grad v = 0 are flagged.
TwoSolutionCheck residual_two_solution(const C2Field& u, const C2Field& v, double p,
                                       std::span<const Vec2> samples);

} // namespace plap
