#pragma once

#include "plap/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace plap {

enum class BoundaryFlag : std::uint8_t { Interior = 0, Outer = 1, Inner = 2 };

struct Domain {
    enum class Kind { Disc, Annulus };
    Kind kind = Kind::Disc;
    Vec2 center{};
    double r_outer = 1.0;
    double r_inner = 0.0;

    static Domain disc(double radius, Vec2 center = {});
    static Domain annulus(double r_inner, double r_outer, Vec2 center = {});
    double area() const;
};

struct Tri {
    int v0, v1, v2;
};

/// Triangulation of a disc or annulus built from concentric vertex rings,
/// strip-triangulated between neighbouring rings. All triangles are
/// positively oriented. Immutable after construction; point location uses a
/// uniform bin grid and is safe to call concurrently.
class TriMesh {
public:
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    Vec2 vertex(int v) const { return vertices_[v]; }
    Tri triangle(int t) const { return triangles_[t]; }
    BoundaryFlag flag(int v) const { return flags_[v]; }
    bool is_boundary(int v) const { return flags_[v] != BoundaryFlag::Interior; }
    double target_h() const { return h_; }
    const Domain& domain() const { return domain_; }

    double triangle_area(int t) const;

    /// Index of the triangle containing x (lowest index when x lies on a
    /// shared edge); points within h*1e-6 of the mesh are snapped to the
    /// nearest candidate. Returns -1 when x is outside.
    int locate(Vec2 x) const;

private:
    friend TriMesh build_mesh(const Domain&, double, std::uint64_t);

    void build_locator();

    std::vector<Vec2> vertices_;
    std::vector<Tri> triangles_;
    std::vector<BoundaryFlag> flags_;
    double h_ = 0.0;
    Domain domain_{};

    // uniform bin grid over the bounding box
    double cell_ = 1.0;
    Vec2 grid_min_{};
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;
};

/// Triangulates the domain with target edge length h. A nonzero jitter seed
/// perturbs interior vertices reproducibly (boundary vertices stay on their
/// circles); triangle validity is re-checked afterwards.
TriMesh build_mesh(const Domain& domain, double h, std::uint64_t jitter_seed = 0);

/// Piecewise-linear nodal field on a shared immutable mesh.
struct ScalarField {
    std::shared_ptr<const TriMesh> mesh;
    std::vector<double> values; // one per vertex
};

ScalarField nodal_field(std::shared_ptr<const TriMesh> mesh,
                        const std::function<double(Vec2)>& f);

double max_abs_nodal(const ScalarField& field);

/// Barycentric interpolation; exact for nodal samples of affine functions.
/// Throws std::domain_error naming the point when x is outside the mesh.
double interpolate(const ScalarField& field, Vec2 x);

/// Constant gradient of the linear interpolant on one triangle.
Vec2 element_gradient(const ScalarField& field, int tri);

/// Values, gradients and radial derivatives on the circle |x - center| = r,
/// sampled at n_theta uniform angles.
struct CircleSample {
    Vec2 center{};
    double r = 0.0;
    std::vector<double> theta;
    std::vector<double> u;
    std::vector<Vec2> grad;
    std::vector<double> u_nu; // grad . nu with nu the outward radial unit vector
};

CircleSample sample_circle(const ScalarField& field, Vec2 center, double r, int n_theta);

// --- plain-text exports (formats documented in the README) ---

void write_mesh(std::ostream& os, const TriMesh& mesh);
void write_field_csv(std::ostream& os, const ScalarField& field);
std::vector<double> read_field_csv(std::istream& is);

} // namespace plap
