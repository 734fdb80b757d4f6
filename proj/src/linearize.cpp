#include "plap/linearize.hpp"

#include <cmath>
#include <stdexcept>

namespace plap {

C2Field c2_field(const ExactSolution& sol) {
    return {[sol](Vec2 x) { return sol.value(x); },
            [sol](Vec2 x) { return sol.gradient(x); },
            [sol](Vec2 x) { return sol.hessian(x); }};
}

double p_laplace_residual(const C2Field& u, double p, Vec2 x) {
    const Vec2 g = u.gradient(x);
    const Sym2 hess = u.hessian(x);
    return norm2(g) * hess.trace() + (p - 2.0) * hess.quad(g);
}

double quadratic_form(Vec2 alpha, Vec2 xi, double p) {
    const double axi = dot(alpha, xi);
    return norm2(alpha) * norm2(xi) + (p - 2.0) * axi * axi;
}

EllipticityBounds ellipticity_bounds(Vec2 alpha, double p) {
    const double a2 = norm2(alpha);
    if (a2 == 0.0)
        throw std::domain_error("ellipticity bounds need a nonzero slope alpha");
    return {std::min(1.0, p - 1.0) * a2, std::max(1.0, p - 1.0) * a2};
}

Sym2 principal_matrix(Vec2 alpha, double p) {
    const double a2 = norm2(alpha);
    return {a2 + (p - 2.0) * alpha.x * alpha.x, (p - 2.0) * alpha.x * alpha.y,
            a2 + (p - 2.0) * alpha.y * alpha.y};
}

double grouped_remainder(const C2Field& h, Vec2 alpha, double p, Vec2 x) {
    const Vec2 g = h.gradient(x);
    const Sym2 hess = h.hessian(x);
    const double lap = hess.trace();
    return norm2(g) * lap + 2.0 * dot(g, alpha) * lap +
           (p - 2.0) * (hess.quad(g) + 2.0 * dot(g, hess.apply(alpha)));
}

Vec2 drift_coefficients(const C2Field& h, Vec2 alpha, double p, Vec2 x) {
    const Vec2 g = h.gradient(x);
    const double g2 = norm2(g);
    if (g2 == 0.0) return {0.0, 0.0};
    return (grouped_remainder(h, alpha, p, x) / g2) * g;
}

namespace {

C2Field difference_to_affine(const C2Field& u, const ExactSolution& affine_L) {
    if (affine_L.kind() != ExactKind::Affine)
        throw std::invalid_argument("linearization reference must be an affine catalog member");
    return {[&u, affine_L](Vec2 x) { return u.value(x) - affine_L.value(x); },
            [&u, affine_L](Vec2 x) { return u.gradient(x) - affine_L.gradient(x); },
            [&u](Vec2 x) { return u.hessian(x); }};
}

} // namespace

AffineLinearization linearize_at_affine(const C2Field& u, const ExactSolution& affine_L,
                                        double p) {
    const Vec2 alpha = affine_L.gradient({0.0, 0.0});
    if (norm2(alpha) == 0.0)
        throw std::domain_error("linearization needs an affine reference with nonzero slope");
    AffineLinearization lin;
    lin.alpha = alpha;
    lin.p = p;
    lin.principal = principal_matrix(alpha, p);
    C2Field h = difference_to_affine(u, affine_L);
    lin.drift = [h, alpha, p](Vec2 x) { return drift_coefficients(h, alpha, p, x); };
    return lin;
}

double residual_affine_linearization(const C2Field& u, const ExactSolution& affine_L, double p,
                                     std::span<const Vec2> samples) {
    const Vec2 alpha = affine_L.gradient({0.0, 0.0});
    if (norm2(alpha) == 0.0)
        throw std::domain_error("linearization needs an affine reference with nonzero slope");
    const C2Field h = difference_to_affine(u, affine_L);
    double worst = 0.0;
    for (const Vec2 x : samples) {
        const Sym2 hess = h.hessian(x);
        const Vec2 g = h.gradient(x);
        const double principal = norm2(alpha) * hess.trace() + (p - 2.0) * hess.quad(alpha);
        const double res = principal + dot(drift_coefficients(h, alpha, p, x), g);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

TwoSolutionCheck residual_two_solution(const C2Field& u, const C2Field& v, double p,
                                       std::span<const Vec2> samples) {
    TwoSolutionCheck check;
    for (size_t i = 0; i < samples.size(); ++i) {
        const Vec2 x = samples[i];
        const Vec2 ug = u.gradient(x), vg = v.gradient(x);
        const Sym2 uh = u.hessian(x), vh = v.hessian(x);
        const Vec2 hg = ug - vg;
        const Sym2 hh = uh - vh;
        if (norm2(vg) == 0.0) check.flagged.push_back(static_cast<int>(i));
        const double res = norm2(vg) * hh.trace() + (p - 2.0) * hh.quad(vg) +
                           dot(vg + ug, hg) * uh.trace() +
                           (p - 2.0) * (dot(vg, uh.apply(hg)) + dot(hg, uh.apply(ug)));
        check.max_residual = std::max(check.max_residual, std::abs(res));
    }
    return check;
}

} // namespace plap
