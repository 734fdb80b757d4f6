#pragma once

#include "plap/geometry.hpp"

#include <span>
#include <string>

namespace plap {

enum class ExactKind { Affine, HarmonicPolynomial, RadialFundamental, Constant };

/// Closed-form reference solutions with analytic first and second derivatives.
/// Instances are immutable; evaluation is pure and thread-safe.
///
///   affine               a.x + l0, solves the equation for every p
///   harmonic_polynomial  Re((x+iy)^k), harmonic (the p = 2 family)
///   radial_fundamental   |x-c|^((p-n)/(p-1)), log|x-c| when p = n
///   constant             c
class ExactSolution {
public:
    static ExactSolution affine(Vec2 l, double l0);
    static ExactSolution harmonic_polynomial(int degree);
    static ExactSolution radial_fundamental(double p, int n = 2, Vec2 center = {});
    static ExactSolution constant(double c);

    /// Parses a catalog id: "affine:LX,LY,L0", "harmpoly:K", "radial[:P[,N]]",
    /// "const:C". `ambient_p` supplies the exponent when "radial" omits it.
    static ExactSolution parse(const std::string& id, double ambient_p);

    double value(Vec2 x) const;
    Vec2 gradient(Vec2 x) const;
    Sym2 hessian(Vec2 x) const;

    /// True when the member solves the p-Laplace equation for this exponent.
    bool solves_for(double p) const;

    ExactKind kind() const { return kind_; }
    std::string id() const;
    Vec2 singular_center() const { return center_; }

private:
    ExactSolution() = default;

    ExactKind kind_ = ExactKind::Constant;
    Vec2 l_{};          // Affine slope
    double l0_ = 0.0;   // Affine offset
    int degree_ = 1;    // HarmonicPolynomial
    double p_ = 2.0;    // RadialFundamental exponent
    int dim_ = 2;       // RadialFundamental ambient dimension
    Vec2 center_{};     // RadialFundamental singularity
    double c_ = 0.0;    // Constant
};

struct PHarmonicCheck {
    double max_residual = 0.0;
    int evaluated = 0;
    int skipped = 0; // samples where the gradient vanishes
};

/// Evaluates the nondivergence-form residual
///   |grad u|^2 lap(u) + (p-2) sum_ij u_i u_j u_ij
/// at each sample using analytic derivatives. Samples with vanishing gradient
/// are skipped and counted (the residual is trivially zero there).
PHarmonicCheck verify_p_harmonic(const ExactSolution& sol, double p,
                                 std::span<const Vec2> samples);

} // namespace plap
