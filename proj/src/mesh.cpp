#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace plap {

namespace {

constexpr double kPi = std::numbers::pi;

std::string point_str(Vec2 x) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.x << ", " << x.y << ")";
    return os.str();
}

/// Signed-distance containment test: x is inside the triangle when it lies on
/// the left of every (counter-clockwise) edge, within tol_abs of the edge line.
bool inside_tol(Vec2 a, Vec2 b, Vec2 c, Vec2 x, double tol_abs) {
    const Vec2 p[3] = {a, b, c};
    for (int e = 0; e < 3; ++e) {
        const Vec2 s = p[e];
        const Vec2 t = p[(e + 1) % 3];
        const double len = norm(t - s);
        if (cross(t - s, x - s) < -tol_abs * len) return false;
    }
    return true;
}

} // namespace

Domain Domain::disc(double radius, Vec2 center) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("disc radius must be positive");
    Domain d;
    d.kind = Kind::Disc;
    d.center = center;
    d.r_outer = radius;
    d.r_inner = 0.0;
    return d;
}

Domain Domain::annulus(double r_inner, double r_outer, Vec2 center) {
    if (!(r_inner > 0.0) || !(r_outer > r_inner) || !std::isfinite(r_outer))
        throw std::invalid_argument("annulus needs 0 < r_inner < r_outer");
    Domain d;
    d.kind = Kind::Annulus;
    d.center = center;
    d.r_outer = r_outer;
    d.r_inner = r_inner;
    return d;
}

double Domain::area() const { return kPi * (r_outer * r_outer - r_inner * r_inner); }

double TriMesh::triangle_area(int t) const {
    const Tri tr = triangles_[t];
    return 0.5 * cross(vertices_[tr.v1] - vertices_[tr.v0], vertices_[tr.v2] - vertices_[tr.v0]);
}

void TriMesh::build_locator() {
    const double R = domain_.r_outer;
    grid_min_ = domain_.center - Vec2{R + h_, R + h_};
    cell_ = h_;
    const double span = 2.0 * (R + h_);
    nx_ = ny_ = std::max(1, static_cast<int>(std::ceil(span / cell_)));
    cells_.assign(static_cast<size_t>(nx_) * ny_, {});
    for (int t = 0; t < triangle_count(); ++t) {
        const Tri tr = triangles_[t];
        const Vec2 a = vertices_[tr.v0], b = vertices_[tr.v1], c = vertices_[tr.v2];
        const double xmin = std::min({a.x, b.x, c.x}), xmax = std::max({a.x, b.x, c.x});
        const double ymin = std::min({a.y, b.y, c.y}), ymax = std::max({a.y, b.y, c.y});
        const int i0 = std::clamp(static_cast<int>(std::floor((xmin - grid_min_.x) / cell_)), 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>(std::floor((xmax - grid_min_.x) / cell_)), 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor((ymin - grid_min_.y) / cell_)), 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>(std::floor((ymax - grid_min_.y) / cell_)), 0, ny_ - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                cells_[static_cast<size_t>(j) * nx_ + i].push_back(t);
    }
    // triangle ids were inserted in ascending order already; keep lists sorted
    // so edge ties resolve to the lowest index
}

int TriMesh::locate(Vec2 x) const {
    const int i = std::clamp(static_cast<int>(std::floor((x.x - grid_min_.x) / cell_)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x.y - grid_min_.y) / cell_)), 0, ny_ - 1);
    const auto& cand = cells_[static_cast<size_t>(j) * nx_ + i];
    const double strict = 1e-12 * std::max(1.0, domain_.r_outer);
    for (int t : cand) {
        const Tri tr = triangles_[t];
        if (inside_tol(vertices_[tr.v0], vertices_[tr.v1], vertices_[tr.v2], x, strict)) return t;
    }
    const double snap = h_ * 1e-6;
    for (int t : cand) {
        const Tri tr = triangles_[t];
        if (inside_tol(vertices_[tr.v0], vertices_[tr.v1], vertices_[tr.v2], x, snap)) return t;
    }
    return -1;
}

TriMesh build_mesh(const Domain& domain, double h, std::uint64_t jitter_seed) {
    const double width = domain.r_outer - domain.r_inner;
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("mesh size h must be positive");
    if (h > width / 2.0 * (1.0 + 1e-12))
        throw std::invalid_argument("mesh size h too large for the domain (need h <= (r_outer - r_inner)/2)");

    TriMesh mesh;
    mesh.h_ = h;
    mesh.domain_ = domain;

    const int n_rings = std::max(2, static_cast<int>(std::lround(width / h)));
    const double dr = width / n_rings;
    const bool disc = domain.kind == Domain::Kind::Disc;

    // ring radii: disc has a centre vertex plus rings 1..n, annulus rings 0..n
    std::vector<double> ring_r;
    std::vector<int> ring_start, ring_count;
    if (disc) {
        mesh.vertices_.push_back(domain.center);
        mesh.flags_.push_back(BoundaryFlag::Interior);
    }
    const int first_ring = disc ? 1 : 0;
    for (int i = first_ring; i <= n_rings; ++i) {
        const double r = domain.r_inner + i * dr;
        const int count = std::max(6, static_cast<int>(std::lround(2.0 * kPi * r / h)));
        ring_r.push_back(r);
        ring_count.push_back(count);
        ring_start.push_back(mesh.vertex_count());
        BoundaryFlag flag = BoundaryFlag::Interior;
        if (i == n_rings) flag = BoundaryFlag::Outer;
        else if (!disc && i == 0) flag = BoundaryFlag::Inner;
        for (int j = 0; j < count; ++j) {
            const double th = 2.0 * kPi * j / count;
            mesh.vertices_.push_back(domain.center + Vec2{r * std::cos(th), r * std::sin(th)});
            mesh.flags_.push_back(flag);
        }
    }

    if (disc) {
        // fan between the centre vertex and the first ring
        const int n0 = ring_count[0];
        for (int j = 0; j < n0; ++j)
            mesh.triangles_.push_back({0, ring_start[0] + j, ring_start[0] + (j + 1) % n0});
    }
    // strips between consecutive rings: advance whichever ring has the smaller
    // next angle, keeping counter-clockwise orientation
    for (size_t k = 0; k + 1 < ring_r.size(); ++k) {
        const int na = ring_count[k], nb = ring_count[k + 1];
        const int sa = ring_start[k], sb = ring_start[k + 1];
        int i = 0, j = 0;
        while (i < na || j < nb) {
            bool advance_inner;
            if (i == na) advance_inner = false;
            else if (j == nb) advance_inner = true;
            else advance_inner = static_cast<long long>(i + 1) * nb <= static_cast<long long>(j + 1) * na;
            if (advance_inner) {
                mesh.triangles_.push_back({sa + i % na, sb + j % nb, sa + (i + 1) % na});
                ++i;
            } else {
                mesh.triangles_.push_back({sa + i % na, sb + j % nb, sb + (j + 1) % nb});
                ++j;
            }
        }
    }

    if (jitter_seed != 0) {
        std::mt19937_64 rng(jitter_seed);
        std::uniform_real_distribution<double> shift(-0.12 * h, 0.12 * h);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.flags_[v] != BoundaryFlag::Interior) continue;
            const double dx = shift(rng), dy = shift(rng);
            mesh.vertices_[v] = mesh.vertices_[v] + Vec2{dx, dy};
        }
    }

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (!(mesh.triangle_area(t) > 0.0))
            throw std::runtime_error("mesh construction produced a degenerate triangle at index " +
                                     std::to_string(t));
    }

    mesh.build_locator();
    return mesh;
}

ScalarField nodal_field(std::shared_ptr<const TriMesh> mesh,
                        const std::function<double(Vec2)>& f) {
    ScalarField field;
    field.values.reserve(mesh->vertex_count());
    for (int v = 0; v < mesh->vertex_count(); ++v) field.values.push_back(f(mesh->vertex(v)));
    field.mesh = std::move(mesh);
    return field;
}

double max_abs_nodal(const ScalarField& field) {
    double m = 0.0;
    for (double v : field.values) m = std::max(m, std::abs(v));
    return m;
}

double interpolate(const ScalarField& field, Vec2 x) {
    const TriMesh& mesh = *field.mesh;
    const int t = mesh.locate(x);
    if (t < 0)
        throw std::domain_error("point " + point_str(x) + " is outside the mesh");
    const Tri tr = mesh.triangle(t);
    const Vec2 a = mesh.vertex(tr.v0), b = mesh.vertex(tr.v1), c = mesh.vertex(tr.v2);
    const double w0 = cross(b - x, c - x);
    const double w1 = cross(c - x, a - x);
    const double w2 = cross(a - x, b - x);
    const double s = w0 + w1 + w2;
    return (w0 * field.values[tr.v0] + w1 * field.values[tr.v1] + w2 * field.values[tr.v2]) / s;
}

Vec2 element_gradient(const ScalarField& field, int tri) {
    const TriMesh& mesh = *field.mesh;
    const Tri tr = mesh.triangle(tri);
    const Vec2 a = mesh.vertex(tr.v0), b = mesh.vertex(tr.v1), c = mesh.vertex(tr.v2);
    const double two_area = cross(b - a, c - a);
    const double d1 = field.values[tr.v1] - field.values[tr.v0];
    const double d2 = field.values[tr.v2] - field.values[tr.v0];
    // solve [b-a; c-a] g = (d1, d2)
    return {(d1 * (c.y - a.y) - d2 * (b.y - a.y)) / two_area,
            (d2 * (b.x - a.x) - d1 * (c.x - a.x)) / two_area};
}

CircleSample sample_circle(const ScalarField& field, Vec2 center, double r, int n_theta) {
    if (n_theta < 64) throw std::invalid_argument("circle sampling needs n_theta >= 64");
    if (!(r > 0.0)) throw std::invalid_argument("circle sampling needs r > 0");
    const TriMesh& mesh = *field.mesh;
    CircleSample s;
    s.center = center;
    s.r = r;
    s.theta.resize(n_theta);
    s.u.resize(n_theta);
    s.grad.resize(n_theta);
    s.u_nu.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * kPi * j / n_theta;
        const Vec2 nu{std::cos(th), std::sin(th)};
        const Vec2 x = center + r * nu;
        const int t = mesh.locate(x);
        if (t < 0)
            throw std::domain_error("circle of radius " + std::to_string(r) + " leaves the mesh at " +
                                    point_str(x));
        const Tri tr = mesh.triangle(t);
        const Vec2 a = mesh.vertex(tr.v0), b = mesh.vertex(tr.v1), c = mesh.vertex(tr.v2);
        const double w0 = cross(b - x, c - x);
        const double w1 = cross(c - x, a - x);
        const double w2 = cross(a - x, b - x);
        const double sum = w0 + w1 + w2;
        s.theta[j] = th;
        s.u[j] = (w0 * field.values[tr.v0] + w1 * field.values[tr.v1] + w2 * field.values[tr.v2]) / sum;
        s.grad[j] = element_gradient(field, t);
        s.u_nu[j] = dot(s.grad[j], nu);
    }
    return s;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
    os.precision(17);
    os << "# vertices " << mesh.vertex_count() << " triangles " << mesh.triangle_count() << "\n";
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec2 p = mesh.vertex(v);
        os << "v " << p.x << " " << p.y << " " << static_cast<int>(mesh.flag(v)) << "\n";
    }
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Tri tr = mesh.triangle(t);
        os << "t " << tr.v0 << " " << tr.v1 << " " << tr.v2 << "\n";
    }
}

void write_field_csv(std::ostream& os, const ScalarField& field) {
    os.precision(17);
    os << "value\n";
    for (double v : field.values) os << v << "\n";
}

std::vector<double> read_field_csv(std::istream& is) {
    std::vector<double> values;
    std::string line;
    if (!std::getline(is, line) || line != "value")
        throw std::runtime_error("field csv: missing 'value' header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    return values;
}

} // namespace plap
