#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/exact.hpp"
#include "plap/mesh.hpp"
#include "plap/solver.hpp"

#include <cmath>
#include <numbers>

using namespace plap;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const TriMesh> disc_mesh(double h) {
    return std::make_shared<const TriMesh>(build_mesh(Domain::disc(1.0), h));
}

double max_nodal_error(const ScalarField& field, const ExactSolution& exact) {
    double worst = 0.0;
    for (int v = 0; v < field.mesh->vertex_count(); ++v)
        worst = std::max(worst, std::abs(field.values[v] - exact.value(field.mesh->vertex(v))));
    return worst;
}

} // namespace

TEST_CASE("regularized energy closed forms") {
    const auto mesh = disc_mesh(0.05);
    double area = 0.0;
    for (int t = 0; t < mesh->triangle_count(); ++t) area += mesh->triangle_area(t);

    const ScalarField zero = nodal_field(mesh, [](Vec2) { return 0.0; });
    CHECK(regularized_energy(zero, 3.0, 0.0) == 0.0);
    // integrand is identically 1, so the energy equals the meshed area
    CHECK(regularized_energy(zero, 2.6, 1.0) == doctest::Approx(area).epsilon(1e-12));
    CHECK(area == doctest::Approx(kPi).epsilon(0.01));

    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return x.x; });
    CHECK(regularized_energy(affine, 3.0, 0.0) == doctest::Approx(area).epsilon(1e-12));

    CHECK_THROWS_AS(regularized_energy(zero, 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("energy is monotone in the regularization") {
    const auto mesh = disc_mesh(0.1);
    const ScalarField field = nodal_field(mesh, [](Vec2 x) { return x.x * x.x - x.y; });
    double prev = regularized_energy(field, 3.0, 0.0);
    for (double eps : {1e-8, 1e-4, 1e-2, 0.5, 1.0}) {
        const double next = regularized_energy(field, 3.0, eps);
        CHECK(next >= prev);
        prev = next;
    }
}

TEST_CASE("weighted stiffness assembly") {
    const auto mesh = disc_mesh(0.2);
    const ScalarField zero = nodal_field(mesh, [](Vec2) { return 0.0; });
    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return x.x; });
    const ScalarField bumpy = nodal_field(mesh, [](Vec2 x) { return std::sin(5 * x.x) * x.y; });

    // p = 2: the weight exponent vanishes, so the matrix ignores field and eps
    const auto laplace = assemble_weighted_stiffness(zero, 2.0, 0.123);
    const auto laplace2 = assemble_weighted_stiffness(bumpy, 2.0, 7.0);
    REQUIRE(laplace.matrix.val.size() == laplace2.matrix.val.size());
    for (size_t k = 0; k < laplace.matrix.val.size(); ++k)
        CHECK(laplace.matrix.val[k] == laplace2.matrix.val[k]);

    // zero field, p = 4: every weight is eps^(p/2-1) = eps
    const auto scaled = assemble_weighted_stiffness(zero, 4.0, 0.01);
    for (size_t k = 0; k < scaled.matrix.val.size(); ++k)
        CHECK(scaled.matrix.val[k] == doctest::Approx(0.01 * laplace.matrix.val[k]).epsilon(1e-12));

    // affine field with unit slope, p = 3, eps = 0: weights are exactly 1
    const auto unit = assemble_weighted_stiffness(affine, 3.0, 0.0);
    for (size_t k = 0; k < unit.matrix.val.size(); ++k)
        CHECK(unit.matrix.val[k] == doctest::Approx(laplace.matrix.val[k]).epsilon(1e-12));

    // degenerate weight: zero gradient, eps = 0, p < 2 blows up
    CHECK_THROWS_AS(assemble_weighted_stiffness(zero, 1.5, 0.0), std::domain_error);
    // and p > 2 with eps = 0 yields zero weights, also rejected
    CHECK_THROWS_AS(assemble_weighted_stiffness(zero, 4.0, 0.0), std::domain_error);
}

TEST_CASE("weak residual vanishes for constant-flux fields") {
    const auto mesh = disc_mesh(0.1);
    const ScalarField zero = nodal_field(mesh, [](Vec2) { return 0.0; });
    CHECK(weak_residual_norm(zero, 2.0) == 0.0);
    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return 2.0 * x.x - x.y + 1.0; });
    for (double p : {1.5, 2.0, 3.0, 4.5}) CHECK(weak_residual_norm(affine, p) <= 1e-12);
}

TEST_CASE("affine boundary data reproduces the affine solution") {
    const auto mesh = disc_mesh(0.1);
    const auto exact = ExactSolution::affine({2, 0}, 1);
    for (double p : {1.5, 3.0}) {
        const auto [field, report] = picard_solve(mesh, exact, p);
        CHECK(report.converged);
        CHECK(max_nodal_error(field, exact) <= 1e-8);
        CHECK(weak_residual_norm(field, p) <= 1e-8);
        // energy within each stage must not increase
        for (const StageRecord& st : report.stages) {
            for (size_t i = 1; i < st.energies.size(); ++i)
                CHECK(st.energies[i] <= st.energies[i - 1] * (1.0 + 1e-12) + 1e-14);
        }
        // the continuation reached the target band
        CHECK(report.stages.back().eps <= 1e-8 * (1.0 + 1e-12));
    }
}

TEST_CASE("zero boundary data yields the zero field") {
    const auto mesh = disc_mesh(0.2);
    const auto [field, report] = picard_solve(mesh, ExactSolution::constant(0.0), 3.0);
    CHECK(report.converged);
    CHECK(max_abs_nodal(field) <= 1e-14);
    CHECK(report.residual == 0.0);
}

TEST_CASE("p = 2 path equals the direct linear solve bit for bit") {
    const auto mesh = disc_mesh(0.1);
    const auto data = ExactSolution::harmonic_polynomial(2);
    std::vector<double> bvals(mesh->vertex_count(), 0.0);
    for (int v = 0; v < mesh->vertex_count(); ++v)
        if (mesh->is_boundary(v)) bvals[v] = data.value(mesh->vertex(v));

    SolverConfig cfg;
    const ScalarField direct = solve_laplace(mesh, bvals, cfg.linear_tol);
    const auto [field, report] = picard_solve(mesh, bvals, 2.0, {}, cfg);
    CHECK(report.converged);
    CHECK(report.stages.size() == 1);
    CHECK(report.stages[0].iterations == 1);
    REQUIRE(field.values.size() == direct.values.size());
    for (size_t v = 0; v < field.values.size(); ++v) CHECK(field.values[v] == direct.values[v]);
}

TEST_CASE("harmonic data converges at second order") {
    const auto exact = ExactSolution::harmonic_polynomial(2);
    const auto mesh = disc_mesh(0.02);
    const auto [field, report] = picard_solve(mesh, exact, 2.0);
    CHECK(report.converged);
    CHECK(max_nodal_error(field, exact) <= 1e-3);

    // maximum principle: nodal range within the boundary data range
    double bmin = 1e300, bmax = -1e300;
    for (int v = 0; v < mesh->vertex_count(); ++v) {
        if (mesh->is_boundary(v)) {
            bmin = std::min(bmin, field.values[v]);
            bmax = std::max(bmax, field.values[v]);
        }
    }
    for (double value : field.values) {
        CHECK(value >= bmin - 1e-8);
        CHECK(value <= bmax + 1e-8);
    }
}

TEST_CASE("radial data on an annulus converges for p = 3") {
    const auto mesh = std::make_shared<const TriMesh>(build_mesh(Domain::annulus(0.5, 1.0), 0.05));
    const auto exact = ExactSolution::radial_fundamental(3.0, 2);
    const auto [field, report] = picard_solve(mesh, exact, 3.0);
    CHECK(report.converged);
    CHECK(report.residual <= 1e-8);
    CHECK(max_nodal_error(field, exact) <= 5e-4);
}

TEST_CASE("explicit boundary values match the catalog route") {
    const auto mesh = disc_mesh(0.2);
    const auto exact = ExactSolution::affine({1, -1}, 0.5);
    std::vector<double> bvals(mesh->vertex_count(), 0.0);
    for (int v = 0; v < mesh->vertex_count(); ++v)
        if (mesh->is_boundary(v)) bvals[v] = exact.value(mesh->vertex(v));
    const auto [a, ra] = picard_solve(mesh, exact, 3.0);
    const auto [b, rb] = picard_solve(mesh, bvals, 3.0);
    for (size_t v = 0; v < a.values.size(); ++v) CHECK(a.values[v] == b.values[v]);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
    const auto mesh = disc_mesh(0.15);
    RegularizationSchedule sched;
    SolverConfig cfg;
    cfg.max_outer = 2;
    cfg.max_inner = 1;
    cfg.residual_tol = 1e-14;
    const auto [field, report] =
        picard_solve(mesh, ExactSolution::harmonic_polynomial(2), 4.0, sched, cfg);
    CHECK_FALSE(report.converged);
    CHECK_FALSE(report.message.empty());
    CHECK(report.stages.size() == 2);

    CHECK_THROWS_AS(picard_solve(mesh, ExactSolution::constant(1.0), 0.5),
                    std::invalid_argument);
    std::vector<double> bad(mesh->vertex_count(), 0.0);
    bad[mesh->vertex_count() - 1] = std::nan("");
    CHECK_THROWS_AS(picard_solve(mesh, bad, 2.0), std::invalid_argument);
}
