#pragma once

#include "plap/geometry.hpp"

#include <cmath>
#include <numbers>

namespace plap {

/// Trapezoid rule for a periodic uniform sample of the circle of radius r:
/// integral over the circle of g dS ~= (2 pi r / N) sum g_j. Exact for
/// trigonometric polynomials of degree < N.
template <class Series>
double circle_quadrature(const Series& samples, double r) {
    double sum = 0.0;
    for (double v : samples) sum += v;
    return sum * (2.0 * std::numbers::pi * r / static_cast<double>(samples.size()));
}

enum class RadialRule {
    Midpoint, // composite midpoint: robust for fields with kinks across elements
    Gauss4    // composite 4-point Gauss-Legendre: for smooth closed-form fields
};

/// Polar tensor quadrature of f over the annulus r_in <= |x - c| <= r_out
/// (r_in = 0 gives the disc): n_r radial cells by n_theta angles. With
/// ring_offsets each ring's angular grid is rotated by a golden-ratio shift so
/// the sampling never locks onto the angular pattern of a structured mesh.
template <class F>
double polar_quadrature(F&& f, Vec2 c, double r_in, double r_out, int n_r, int n_theta,
                        RadialRule rule, bool ring_offsets) {
    constexpr double kGolden = 0.61803398874989485;
    const double dr = (r_out - r_in) / n_r;
    const double dth = 2.0 * std::numbers::pi / n_theta;
    double total = 0.0;

    auto ring_sum = [&](double rho, double offset) {
        double s = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double th = dth * (j + offset);
            s += f(c + Vec2{rho * std::cos(th), rho * std::sin(th)}) * rho;
        }
        return s * dth;
    };

    if (rule == RadialRule::Midpoint) {
        for (int i = 0; i < n_r; ++i) {
            const double rho = r_in + (i + 0.5) * dr;
            const double offset = ring_offsets ? std::fmod(i * kGolden, 1.0) : 0.0;
            total += ring_sum(rho, offset) * dr;
        }
        return total;
    }

    static constexpr double kNode[2] = {0.33998104358485626, 0.86113631159405258};
    static constexpr double kWeight[2] = {0.65214515486254614, 0.34785484513745386};
    for (int i = 0; i < n_r; ++i) {
        const double a = r_in + i * dr;
        const double mid = a + 0.5 * dr, half = 0.5 * dr;
        for (int q = 0; q < 2; ++q) {
            total += kWeight[q] * half * ring_sum(mid - half * kNode[q], 0.0);
            total += kWeight[q] * half * ring_sum(mid + half * kNode[q], 0.0);
        }
    }
    return total;
}

} // namespace plap
