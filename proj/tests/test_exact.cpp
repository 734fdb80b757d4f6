#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/exact.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace plap;

namespace {

std::vector<Vec2> annulus_points(int count, double r_min, double r_max, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(r_min, r_max), angle(0.0, 2.0 * M_PI);
    std::vector<Vec2> pts;
    for (int i = 0; i < count; ++i) {
        const double r = radius(rng), th = angle(rng);
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return pts;
}

} // namespace

TEST_CASE("affine evaluation and derivatives") {
    const auto sol = ExactSolution::affine({2, 0}, 1);
    CHECK(sol.value({3, 5}) == doctest::Approx(7.0));
    const Vec2 g = sol.gradient({-1.5, 42.0});
    CHECK(g.x == 2.0);
    CHECK(g.y == 0.0);
    const Sym2 hess = sol.hessian({0.3, 0.7});
    CHECK(hess.xx == 0.0);
    CHECK(hess.xy == 0.0);
    CHECK(hess.yy == 0.0);
}

TEST_CASE("harmonic polynomials reproduce Re(z^k)") {
    CHECK(ExactSolution::harmonic_polynomial(2).value({1, 1}) == doctest::Approx(0.0));
    const Vec2 g1 = ExactSolution::harmonic_polynomial(1).gradient({0.4, -0.9});
    CHECK(g1.x == doctest::Approx(1.0));
    CHECK(g1.y == doctest::Approx(0.0));
    // Re z^3 = x^3 - 3xy^2
    const auto k3 = ExactSolution::harmonic_polynomial(3);
    const Vec2 x{0.7, -0.4};
    CHECK(k3.value(x) == doctest::Approx(x.x * x.x * x.x - 3.0 * x.x * x.y * x.y));
    const Sym2 hess = k3.hessian(x);
    CHECK(hess.trace() == doctest::Approx(0.0)); // harmonic
    CHECK(hess.xy == doctest::Approx(-6.0 * x.y).epsilon(1e-12));
}

TEST_CASE("radial fundamental solution exponent") {
    const auto sol = ExactSolution::radial_fundamental(3.0, 2);
    // exponent (p-n)/(p-1) = 1/2, so the value at |x| = 4 is 2
    CHECK(sol.value({4, 0}) == doctest::Approx(2.0));
    CHECK(sol.value({0, 4}) == doctest::Approx(2.0));
    const Vec2 g = sol.gradient({4, 0});
    CHECK(g.x == doctest::Approx(0.25));
    CHECK(g.y == doctest::Approx(0.0));
    CHECK_THROWS_AS(sol.value({0, 0}), std::domain_error);
    CHECK_THROWS_AS(sol.gradient({0, 0}), std::domain_error);

    // p = n gives the logarithmic member
    const auto log_sol = ExactSolution::radial_fundamental(2.0, 2);
    CHECK(log_sol.value({std::exp(1.0), 0}) == doctest::Approx(1.0));
    const Vec2 glog = log_sol.gradient({0, 2});
    CHECK(glog.x == doctest::Approx(0.0));
    CHECK(glog.y == doctest::Approx(0.5));
}

TEST_CASE("nondivergence residual vanishes on the catalog") {
    const auto pts = annulus_points(1000, 0.5, 2.0, 91);

    const auto affine = ExactSolution::affine({1.3, -0.2}, 0.7);
    for (double p : {1.5, 2.0, 3.0, 7.0})
        CHECK(verify_p_harmonic(affine, p, pts).max_residual == 0.0);

    const auto k3 = ExactSolution::harmonic_polynomial(3);
    CHECK(verify_p_harmonic(k3, 2.0, pts).max_residual <= 1e-10);

    for (double p : {1.5, 2.5, 4.0}) {
        const auto radial = ExactSolution::radial_fundamental(p, 2);
        const auto check = verify_p_harmonic(radial, p, pts);
        CHECK(check.max_residual <= 1e-10);
        CHECK(check.evaluated == 1000);
    }

    // log member solves for p = n
    CHECK(verify_p_harmonic(ExactSolution::radial_fundamental(2.0, 2), 2.0, pts).max_residual <=
          1e-10);
}

TEST_CASE("critical points are skipped and counted") {
    const auto k2 = ExactSolution::harmonic_polynomial(2);
    const std::vector<Vec2> pts = {{0, 0}, {1, 0}, {0, 1}};
    const auto check = verify_p_harmonic(k2, 2.0, pts);
    CHECK(check.skipped == 1);
    CHECK(check.evaluated == 2);
}

TEST_CASE("gradients match centered finite differences") {
    const double step = 1e-4;
    const auto pts = annulus_points(60, 0.5, 1.8, 7);
    const ExactSolution members[] = {
        ExactSolution::affine({0.8, -1.1}, 0.3),
        ExactSolution::harmonic_polynomial(3),
        ExactSolution::radial_fundamental(3.5, 2),
        ExactSolution::radial_fundamental(2.0, 2),
        ExactSolution::constant(2.5),
    };
    for (const auto& sol : members) {
        for (const Vec2 x : pts) {
            const Vec2 g = sol.gradient(x);
            const Vec2 fd{(sol.value({x.x + step, x.y}) - sol.value({x.x - step, x.y})) / (2 * step),
                          (sol.value({x.x, x.y + step}) - sol.value({x.x, x.y - step})) / (2 * step)};
            const double scale = std::max(norm(g), 1.0);
            CHECK(norm(g - fd) / scale <= 1e-6);
        }
    }
}

TEST_CASE("affine with zero slope equals the constant member") {
    const auto degenerate = ExactSolution::affine({0, 0}, 2.5);
    const auto constant = ExactSolution::constant(2.5);
    for (const Vec2 x : annulus_points(50, 0.1, 3.0, 3)) {
        CHECK(degenerate.value(x) == constant.value(x));
        CHECK(norm(degenerate.gradient(x) - constant.gradient(x)) == 0.0);
    }
}

TEST_CASE("catalog id parsing") {
    const auto affine = ExactSolution::parse("affine:2,0,1", 3.0);
    CHECK(affine.kind() == ExactKind::Affine);
    CHECK(affine.value({3, 5}) == doctest::Approx(7.0));

    const auto poly = ExactSolution::parse("harmpoly:3", 3.0);
    CHECK(poly.kind() == ExactKind::HarmonicPolynomial);
    CHECK(poly.solves_for(2.0));
    CHECK_FALSE(poly.solves_for(3.0));

    const auto radial = ExactSolution::parse("radial", 3.0);
    CHECK(radial.kind() == ExactKind::RadialFundamental);
    CHECK(radial.solves_for(3.0));
    CHECK(radial.value({4, 0}) == doctest::Approx(2.0));

    CHECK(ExactSolution::parse("const:2.5", 2.0).value({1, 1}) == doctest::Approx(2.5));

    CHECK_THROWS_AS(ExactSolution::parse("affine:1,2", 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ExactSolution::parse("harmpoly:2.5", 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ExactSolution::parse("spiral:1", 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ExactSolution::parse("radial:0.5", 2.0), std::invalid_argument);
}
