#include "plap/field.hpp"

#include <cmath>
#include <numbers>

namespace plap {

FemField::FemField(ScalarField field, double scale)
    : field_(std::move(field)), scale_(scale), scale_abs_(std::abs(scale)),
      nodal_max_(max_abs_nodal(field_)) {}

double FemField::value(Vec2 x) const { return scale_ * interpolate(field_, x); }

Vec2 FemField::gradient(Vec2 x) const {
    const int t = field_.mesh->locate(x);
    if (t < 0) {
        // reuse the interpolation error path for a consistent message
        interpolate(field_, x);
    }
    return scale_ * element_gradient(field_, t);
}

CircleSample sample_circle(const FieldSampler& field, Vec2 center, double r, int n_theta) {
    if (n_theta < 64) throw std::invalid_argument("circle sampling needs n_theta >= 64");
    CircleSample s;
    s.center = center;
    s.r = r;
    s.theta.resize(n_theta);
    s.u.resize(n_theta);
    s.grad.resize(n_theta);
    s.u_nu.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n_theta;
        const Vec2 nu{std::cos(th), std::sin(th)};
        const Vec2 x = center + r * nu;
        s.theta[j] = th;
        s.u[j] = field.value(x);
        s.grad[j] = field.gradient(x);
        s.u_nu[j] = dot(s.grad[j], nu);
    }
    return s;
}

} // namespace plap
