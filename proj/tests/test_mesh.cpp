#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plap/exact.hpp"
#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

using namespace plap;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const TriMesh> shared_mesh(const Domain& domain, double h,
                                           std::uint64_t seed = 0) {
    return std::make_shared<const TriMesh>(build_mesh(domain, h, seed));
}

std::vector<Vec2> random_interior_points(int count, double r_max, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.0, r_max), angle(0.0, 2.0 * kPi);
    std::vector<Vec2> pts;
    for (int i = 0; i < count; ++i) {
        const double r = radius(rng), th = angle(rng);
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return pts;
}

} // namespace

TEST_CASE("coarse disc construction contract") {
    const TriMesh mesh = build_mesh(Domain::disc(1.0), 0.5);
    CHECK(mesh.vertex_count() >= 9);
    // vertex budget: area / h^2 within a factor of 4
    const double target = kPi / 0.25;
    CHECK(mesh.vertex_count() >= target / 4.0);
    CHECK(mesh.vertex_count() <= target * 4.0);
    int outer = 0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.flag(v) == BoundaryFlag::Outer) {
            ++outer;
            CHECK(std::abs(norm(mesh.vertex(v)) - 1.0) <= 0.04);
        }
    }
    CHECK(outer >= 6);
    for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(mesh.triangle_area(t) > 0.0);
}

TEST_CASE("annulus vertices stay in the band") {
    const TriMesh mesh = build_mesh(Domain::annulus(0.5, 1.0), 0.1);
    bool has_inner = false;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const double r = norm(mesh.vertex(v));
        CHECK(r >= 0.46);
        CHECK(r <= 1.0 + 1e-12);
        has_inner = has_inner || mesh.flag(v) == BoundaryFlag::Inner;
    }
    CHECK(has_inner);
}

TEST_CASE("fine disc area approaches pi") {
    const TriMesh mesh = build_mesh(Domain::disc(1.0), 0.02);
    double area = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) area += mesh.triangle_area(t);
    CHECK(std::abs(area - kPi) / kPi <= 0.005);
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(build_mesh(Domain::disc(1.0), 0.6), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(Domain::disc(1.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Domain::annulus(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(Domain::disc(-2.0), std::invalid_argument);
}

TEST_CASE("interpolation reproduces affine fields exactly") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.1);
    const ScalarField field =
        nodal_field(mesh, [](Vec2 x) { return 3.0 * x.x - x.y + 2.0; });
    for (const Vec2 x : random_interior_points(100, 0.95, 5)) {
        CHECK(interpolate(field, x) == doctest::Approx(3.0 * x.x - x.y + 2.0).epsilon(1e-13));
    }
    const ScalarField zero = nodal_field(mesh, [](Vec2) { return 0.0; });
    CHECK(interpolate(zero, {0.3, -0.2}) == 0.0);
}

TEST_CASE("interpolation error for a quadratic is O(h^2)") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.02);
    const ScalarField field = nodal_field(mesh, [](Vec2 x) { return x.x * x.x; });
    CHECK(std::abs(interpolate(field, {0.3, 0.4}) - 0.09) <= 1e-3);
}

TEST_CASE("interpolation outside the mesh names the point") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.1);
    const ScalarField field = nodal_field(mesh, [](Vec2) { return 1.0; });
    CHECK_THROWS_WITH_AS(interpolate(field, {2.0, 0.0}), doctest::Contains("2"),
                         std::domain_error);
}

TEST_CASE("interpolation converges at second order under refinement") {
    const auto exact = ExactSolution::harmonic_polynomial(2);
    const auto pts = random_interior_points(200, 0.8, 11);
    double worst[2];
    int side = 0;
    for (double h : {0.04, 0.02}) {
        const auto mesh = shared_mesh(Domain::disc(1.0), h);
        const ScalarField field = nodal_field(mesh, [&](Vec2 x) { return exact.value(x); });
        double w = 0.0;
        for (const Vec2 x : pts) w = std::max(w, std::abs(interpolate(field, x) - exact.value(x)));
        worst[side++] = w;
    }
    CHECK(worst[0] / worst[1] >= 3.0);
}

TEST_CASE("element gradients of nodal fields") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.05);
    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return 2.0 * x.x - x.y; });
    const ScalarField constant = nodal_field(mesh, [](Vec2) { return 4.0; });
    for (int t = 0; t < mesh->triangle_count(); ++t) {
        const Vec2 g = element_gradient(affine, t);
        CHECK(g.x == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(g.y == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(norm(element_gradient(constant, t)) <= 1e-13);
    }

    const auto fine = shared_mesh(Domain::disc(1.0), 0.02);
    const ScalarField quadratic = nodal_field(fine, [](Vec2 x) { return x.x * x.x; });
    const int t = fine->locate({0.5, 0.0});
    REQUIRE(t >= 0);
    CHECK(std::abs(element_gradient(quadratic, t).x - 1.0) <= 0.05);
}

TEST_CASE("circle samples: constants, affine reproduction, homogeneity") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.02);

    const ScalarField constant = nodal_field(mesh, [](Vec2) { return 3.0; });
    const CircleSample cs = sample_circle(constant, {0, 0}, 0.5, 64);
    for (size_t j = 0; j < cs.u.size(); ++j) {
        CHECK(cs.u[j] == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(std::abs(cs.u_nu[j]) <= 1e-12);
    }

    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return x.x; });
    const CircleSample as = sample_circle(affine, {0, 0}, 0.5, 128);
    for (size_t j = 0; j < as.u.size(); ++j) {
        CHECK(std::abs(as.u[j] - 0.5 * std::cos(as.theta[j])) <= 1e-10);
        CHECK(std::abs(as.u_nu[j] - std::cos(as.theta[j])) <= 1e-10);
    }

    // degree-2 homogeneity: u_nu ~ 2 u / r
    const auto rez2 = ExactSolution::harmonic_polynomial(2);
    const ScalarField poly = nodal_field(mesh, [&](Vec2 x) { return rez2.value(x); });
    const CircleSample ps = sample_circle(poly, {0, 0}, 0.5, 256);
    for (size_t j = 0; j < ps.u.size(); ++j)
        CHECK(std::abs(ps.u_nu[j] - 2.0 * ps.u[j] / 0.5) <= 0.05);
}

TEST_CASE("affine circle gradients do not depend on the sampling") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.05);
    const ScalarField affine = nodal_field(mesh, [](Vec2 x) { return 1.5 * x.x - 0.5 * x.y; });
    for (double r : {0.2, 0.5, 0.8}) {
        for (int n : {64, 128, 257}) {
            const CircleSample s = sample_circle(affine, {0, 0}, r, n);
            for (const Vec2 g : s.grad) {
                CHECK(g.x == doctest::Approx(1.5).epsilon(1e-12));
                CHECK(g.y == doctest::Approx(-0.5).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(sample_circle(affine, {0, 0}, 0.5, 32), std::invalid_argument);
    CHECK_THROWS_AS(sample_circle(affine, {0.9, 0}, 0.5, 64), std::domain_error);
}

TEST_CASE("points on shared edges take the lower triangle index") {
    const TriMesh mesh = build_mesh(Domain::disc(1.0), 0.25);
    // midpoints of interior edges lie on exactly two triangles
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Tri tr = mesh.triangle(t);
        const Vec2 mid = 0.5 * (mesh.vertex(tr.v0) + mesh.vertex(tr.v1));
        const int found = mesh.locate(mid);
        REQUIRE(found >= 0);
        CHECK(found <= t);
    }
}

TEST_CASE("jitter keeps the mesh valid and the boundary fixed") {
    const TriMesh plain = build_mesh(Domain::disc(1.0), 0.1);
    const TriMesh jittered = build_mesh(Domain::disc(1.0), 0.1, 42);
    REQUIRE(plain.vertex_count() == jittered.vertex_count());
    bool moved = false;
    for (int v = 0; v < plain.vertex_count(); ++v) {
        if (plain.is_boundary(v)) {
            CHECK(norm(plain.vertex(v) - jittered.vertex(v)) == 0.0);
        } else if (norm(plain.vertex(v) - jittered.vertex(v)) > 0.0) {
            moved = true;
        }
    }
    CHECK(moved);
    for (int t = 0; t < jittered.triangle_count(); ++t) CHECK(jittered.triangle_area(t) > 0.0);

    // same seed, same mesh
    const TriMesh again = build_mesh(Domain::disc(1.0), 0.1, 42);
    for (int v = 0; v < again.vertex_count(); ++v)
        CHECK(norm(again.vertex(v) - jittered.vertex(v)) == 0.0);
}

TEST_CASE("mesh is edge-connected") {
    const TriMesh mesh = build_mesh(Domain::annulus(0.4, 1.0), 0.07);
    // breadth-first search across shared edges
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Tri tr = mesh.triangle(t);
        const int vs[3] = {tr.v0, tr.v1, tr.v2};
        for (int e = 0; e < 3; ++e) {
            auto key = std::minmax(vs[e], vs[(e + 1) % 3]);
            edge_tris[{key.first, key.second}].push_back(t);
        }
    }
    std::vector<bool> visited(mesh.triangle_count(), false);
    std::queue<int> queue;
    queue.push(0);
    visited[0] = true;
    int reached = 0;
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop();
        ++reached;
        const Tri tr = mesh.triangle(t);
        const int vs[3] = {tr.v0, tr.v1, tr.v2};
        for (int e = 0; e < 3; ++e) {
            auto key = std::minmax(vs[e], vs[(e + 1) % 3]);
            for (int other : edge_tris[{key.first, key.second}]) {
                if (!visited[other]) {
                    visited[other] = true;
                    queue.push(other);
                }
            }
        }
    }
    CHECK(reached == mesh.triangle_count());
}

TEST_CASE("mesh and field exports") {
    const auto mesh = shared_mesh(Domain::disc(1.0), 0.3);
    std::ostringstream os;
    write_mesh(os, *mesh);
    const std::string text = os.str();
    size_t v_lines = 0, t_lines = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++v_lines;
        if (line.rfind("t ", 0) == 0) ++t_lines;
    }
    CHECK(v_lines == static_cast<size_t>(mesh->vertex_count()));
    CHECK(t_lines == static_cast<size_t>(mesh->triangle_count()));

    const ScalarField field = nodal_field(mesh, [](Vec2 x) { return std::sin(3.0 * x.x) + x.y; });
    std::ostringstream fos;
    write_field_csv(fos, field);
    std::istringstream fis(fos.str());
    const std::vector<double> back = read_field_csv(fis);
    REQUIRE(back.size() == field.values.size());
    for (size_t i = 0; i < back.size(); ++i) CHECK(back[i] == field.values[i]);
}
