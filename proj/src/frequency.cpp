#include "plap/frequency.hpp"

#include "plap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

int bulk_rings(const FieldSampler& field, double span, int n_theta) {
    if (field.analytic()) return std::max(32, n_theta / 8);
    const double h = field.resolution();
    return std::max(32, static_cast<int>(std::ceil(span / std::max(h, 1e-12))));
}

RadialRule bulk_rule(const FieldSampler& field) {
    return field.analytic() ? RadialRule::Gauss4 : RadialRule::Midpoint;
}

double circle_max_abs(const CircleSample& s) {
    double m = 0.0;
    for (double v : s.u) m = std::max(m, std::abs(v));
    return m;
}

double boundary_I_of(const CircleSample& s, double p) {
    double sum = 0.0;
    for (double v : s.u) sum += std::pow(std::abs(v), p);
    return sum * (2.0 * std::numbers::pi * s.r / static_cast<double>(s.u.size()));
}

/// |g|^(p-2) g . nu u with the zero-gradient flux convention.
double flux_moment_of(const CircleSample& s, double p) {
    double sum = 0.0;
    for (size_t j = 0; j < s.u.size(); ++j) {
        const double g2 = norm2(s.grad[j]);
        if (g2 == 0.0) continue;
        sum += std::pow(g2, 0.5 * (p - 2.0)) * s.u[j] * s.u_nu[j];
    }
    return sum * (2.0 * std::numbers::pi * s.r / static_cast<double>(s.u.size()));
}

double surface_gradient_mass_of(const CircleSample& s, double p) {
    double sum = 0.0;
    for (const Vec2 g : s.grad) sum += std::pow(norm2(g), 0.5 * p);
    return sum * (2.0 * std::numbers::pi * s.r / static_cast<double>(s.u.size()));
}

/// Scale-aware zero test for I(r): treated as vanishing below
/// 1e-14 * (1 + max|u|^p) * r with max|u| over the nodal values when known,
/// otherwise over the sampled circle.
bool I_is_zero(const FieldSampler& field, const CircleSample& s, double p, double I) {
    const double amp = std::max(field.amplitude_hint(), circle_max_abs(s));
    return I <= 1e-14 * (1.0 + std::pow(amp, p)) * s.r;
}

double young_integral(double p, double r, double s) {
    // integral over (r, s) of t^(-1/(p-1)) dt
    const double q = 1.0 / (p - 1.0);
    if (q == 1.0) return std::log(s / r);
    return (std::pow(s, 1.0 - q) - std::pow(r, 1.0 - q)) / (1.0 - q);
}

} // namespace

double boundary_I(const FieldSampler& field, double p, Vec2 center, double r, int n_theta) {
    if (!(p > 1.0)) throw std::invalid_argument("boundary mass needs p > 1");
    return boundary_I_of(sample_circle(field, center, r, n_theta), p);
}

double bulk_D(const FieldSampler& field, double p, Vec2 center, double r, int n_theta,
              double r_inner) {
    if (!(p > 1.0)) throw std::invalid_argument("bulk energy needs p > 1");
    if (!(r > r_inner && r_inner >= 0.0)) throw std::invalid_argument("bulk energy needs 0 <= r_inner < r");
    const auto f = [&](Vec2 x) { return std::pow(norm2(field.gradient(x)), 0.5 * p); };
    return polar_quadrature(f, center, r_inner, r, bulk_rings(field, r - r_inner, n_theta),
                            n_theta, bulk_rule(field), !field.analytic());
}

double bulk_mass(const FieldSampler& field, double p, Vec2 center, double r, int n_theta) {
    const auto f = [&](Vec2 x) { return std::pow(std::abs(field.value(x)), p); };
    return polar_quadrature(f, center, 0.0, r, bulk_rings(field, r, n_theta), n_theta,
                            bulk_rule(field), !field.analytic());
}

std::optional<double> frequency_F(const FieldSampler& field, double p, Vec2 center, double r,
                                  int n_theta, double radius_exponent) {
    const CircleSample s = sample_circle(field, center, r, n_theta);
    const double I = boundary_I_of(s, p);
    if (I_is_zero(field, s, p, I)) return std::nullopt;
    return std::pow(r, radius_exponent) * bulk_D(field, p, center, r, n_theta) / I;
}

double I_prime_formula(const FieldSampler& field, double p, Vec2 center, double r, int n_theta) {
    if (!(p > 1.0)) throw std::invalid_argument("the derivative formula needs p > 1");
    const CircleSample s = sample_circle(field, center, r, n_theta);
    const double I = boundary_I_of(s, p);
    double sum = 0.0;
    for (size_t j = 0; j < s.u.size(); ++j) {
        const double sign = s.u[j] > 0.0 ? 1.0 : (s.u[j] < 0.0 ? -1.0 : 0.0);
        sum += std::pow(std::abs(s.u[j]), p - 1.0) * sign * s.u_nu[j];
    }
    sum *= 2.0 * std::numbers::pi * r / static_cast<double>(s.u.size());
    return (kDim - 1) / r * I + p * sum;
}

InequalityCheck I_prime_bound_check(const FieldSampler& field, double p, Vec2 center, double r,
                                    int n_theta) {
    const CircleSample s = sample_circle(field, center, r, n_theta);
    const double I = boundary_I_of(s, p);
    double signed_sum = 0.0, abs_sum = 0.0;
    for (size_t j = 0; j < s.u.size(); ++j) {
        const double m = std::pow(std::abs(s.u[j]), p - 1.0);
        const double sign = s.u[j] > 0.0 ? 1.0 : (s.u[j] < 0.0 ? -1.0 : 0.0);
        signed_sum += m * sign * s.u_nu[j];
        abs_sum += m * std::abs(s.u_nu[j]);
    }
    const double w = 2.0 * std::numbers::pi * r / static_cast<double>(s.u.size());
    InequalityCheck check;
    check.lhs = (kDim - 1) / r * I + p * signed_sum * w;
    check.rhs = (kDim - 1) / r * I + p * abs_sum * w;
    const double slack = 1e-8 * std::max({std::abs(check.lhs), std::abs(check.rhs), 1.0});
    check.holds = check.lhs <= check.rhs + slack;
    return check;
}

IdentityRow energy_identity_residual(const FieldSampler& field, double p, Vec2 center, double r,
                                     int n_theta, double r_inner) {
    IdentityRow row;
    row.r = r;
    row.left = bulk_D(field, p, center, r, n_theta, r_inner);
    row.right = flux_moment_of(sample_circle(field, center, r, n_theta), p);
    if (r_inner > 0.0)
        row.right -= flux_moment_of(sample_circle(field, center, r_inner, n_theta), p);
    row.residual =
        std::abs(row.left - row.right) /
        std::max({std::abs(row.left), std::abs(row.right), 1e-14});
    return row;
}

InequalityCheck grad_estimate_check(const FieldSampler& field, double p, Vec2 center, double r,
                                    int n_theta) {
    const CircleSample s = sample_circle(field, center, r, n_theta);
    InequalityCheck check;
    check.lhs = p * bulk_D(field, p, center, r, n_theta);
    check.rhs = (p - 1.0) * surface_gradient_mass_of(s, p) + boundary_I_of(s, p);
    check.holds = check.lhs <= 1.01 * check.rhs + 1e-14;
    return check;
}

bool FrequencyProfile::all_F_defined() const {
    return std::all_of(F_defined.begin(), F_defined.end(), [](std::uint8_t d) { return d != 0; });
}

FrequencyProfile compute_profile(const FieldSampler& field, double p, Vec2 center, double r_b,
                                 double R_b, int count, int n_theta) {
    if (!(r_b >= 0.0 && R_b > r_b)) throw std::invalid_argument("profile needs 0 <= r_b < R_b");
    if (count < 1) throw std::invalid_argument("profile needs at least one radius");
    FrequencyProfile profile;
    profile.p = p;
    profile.center = center;
    profile.n_theta = n_theta;
    profile.M = kQuietNan;
    for (int j = 1; j <= count; ++j) {
        const double r = r_b + (R_b - r_b) * j / count;
        const CircleSample s = sample_circle(field, center, r, n_theta);
        const double I = boundary_I_of(s, p);
        const double D = bulk_D(field, p, center, r, n_theta);
        profile.radii.push_back(r);
        profile.I.push_back(I);
        profile.D.push_back(D);
        profile.Iprime.push_back(I_prime_formula(field, p, center, r, n_theta));
        if (I_is_zero(field, s, p, I)) {
            profile.F.push_back(kQuietNan);
            profile.F_defined.push_back(0);
        } else {
            const double F = r * D / I;
            profile.F.push_back(F);
            profile.F_defined.push_back(1);
            if (std::isnan(profile.M) || F > profile.M) profile.M = F;
        }
    }
    return profile;
}

DoublingReport doubling_scan(const FrequencyProfile& profile) {
    const size_t count = profile.radii.size();
    if (count == 0) throw std::invalid_argument("doubling scan needs a non-empty profile");
    for (size_t j = 0; j < count; ++j) {
        if (!profile.F_defined[j]) {
            std::ostringstream os;
            os << "frequency undefined at r = " << profile.radii[j]
               << " (boundary mass vanishes); locate the vanishing radius first";
            throw std::domain_error(os.str());
        }
    }
    if (!std::isfinite(profile.M)) throw std::domain_error("doubling scan needs finite sup of F");

    DoublingReport report;
    report.p = profile.p;
    report.M = profile.M;
    report.eps0 = 1.0 / (4.0 * profile.p * profile.M);

    // Largest grid radius whose window satisfies both smallness conditions for
    // every pair r <= s; both grow with the pair's spread, so extending the
    // window only needs checks against the new endpoint.
    const double young_coeff =
        std::pow(report.eps0 * profile.p, -1.0 / (profile.p - 1.0)) * (profile.p - 1.0);
    size_t r0_idx = 0;
    for (size_t idx = 1; idx < count; ++idx) {
        const double s = profile.radii[idx];
        bool ok = true;
        for (size_t j = 0; j <= idx && ok; ++j) {
            const double r = profile.radii[j];
            if ((kDim - 1) * std::log(s / r) > 0.25) ok = false;
            else if (young_coeff * young_integral(profile.p, r, s) > 0.25) ok = false;
        }
        if (!ok) break;
        r0_idx = idx;
    }
    report.r0 = profile.radii[r0_idx];

    size_t star_idx = 0;
    for (size_t j = 1; j <= r0_idx; ++j)
        if (profile.I[j] > profile.I[star_idx]) star_idx = j;
    report.r_star = profile.radii[star_idx];

    const double I_star = profile.I[star_idx];
    report.pass = true;
    for (size_t j = 0; j <= star_idx; ++j) {
        const double ratio = I_star / profile.I[j];
        report.window_radii.push_back(profile.radii[j]);
        report.ratios.push_back(ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (!(ratio <= 4.0)) report.pass = false;
    }
    return report;
}

double vanishing_radius(const FieldSampler& field, Vec2 center, std::span<const double> radii,
                        int n_theta, double tol) {
    double s = 0.0;
    for (double r : radii) {
        const CircleSample sample = sample_circle(field, center, r, n_theta);
        if (circle_max_abs(sample) <= tol) s = std::max(s, r);
    }
    return s;
}

double caccioppoli_ratio(const FieldSampler& field, double p, Vec2 center, double r, double rho,
                         int n_theta) {
    if (!(r < rho)) throw std::invalid_argument("caccioppoli ratio needs r < rho");
    const double denom = bulk_mass(field, p, center, rho, n_theta);
    if (denom <= 0.0) throw std::domain_error("caccioppoli ratio: bulk value mass vanishes");
    return bulk_D(field, p, center, r, n_theta) * std::pow(rho - r, p) / denom;
}

ConditionProbes condition_probes(const FieldSampler& field, double p, Vec2 center, double r,
                                 int n_theta) {
    const CircleSample s = sample_circle(field, center, r, n_theta);
    const double I = boundary_I_of(s, p);
    if (I_is_zero(field, s, p, I))
        throw std::domain_error("condition probes need I(r) > 0");
    ConditionProbes probes;
    probes.A1 = surface_gradient_mass_of(s, p) / I;
    probes.A2 = bulk_mass(field, p, center, r, n_theta) / (r * I);
    return probes;
}

PoincareProbe poincare_probe(const FieldSampler& field, double p, Vec2 center, double r,
                             int n_theta, double zero_tol) {
    const double D = bulk_D(field, p, center, r, n_theta);
    if (D <= 0.0) throw std::domain_error("poincare probe needs D(r) > 0");
    const CircleSample s = sample_circle(field, center, r, n_theta);
    if (zero_tol <= 0.0)
        zero_tol = 1e-12 * (1.0 + std::max(field.amplitude_hint(), circle_max_abs(s)));

    const int n_r = bulk_rings(field, r, n_theta);
    double zero_area = 0.0;
    const auto indicator = [&](Vec2 x) {
        return std::abs(field.value(x)) <= zero_tol ? 1.0 : 0.0;
    };
    zero_area = polar_quadrature(indicator, center, 0.0, r, n_r, n_theta, RadialRule::Midpoint,
                                 !field.analytic());
    PoincareProbe probe;
    probe.gamma_hat = zero_area / (std::numbers::pi * r * r);
    probe.C_hat = bulk_mass(field, p, center, r, n_theta) / (std::pow(r, p) * D);
    return probe;
}

ConvexityProbe convexity_probe(const FieldSampler& field, Vec2 center,
                               std::span<const double> radii, int n_theta) {
    if (radii.size() < 3) throw std::invalid_argument("convexity probe needs at least 3 radii");
    ConvexityProbe probe;
    probe.radii.assign(radii.begin(), radii.end());
    std::vector<double> bulk, surf;
    for (double r : radii) {
        bulk.push_back(bulk_mass(field, 2.0, center, r, n_theta));
        surf.push_back(boundary_I(field, 2.0, center, r, n_theta));
    }
    double bulk_scale = 0.0, surf_scale = 0.0, ratio_scale = 0.0;
    for (size_t j = 0; j < radii.size(); ++j) {
        bulk_scale = std::max(bulk_scale, std::abs(bulk[j]));
        surf_scale = std::max(surf_scale, std::abs(surf[j]));
        ratio_scale = std::max(ratio_scale, std::abs(surf[j] / radii[j]));
    }
    probe.all_pass = true;
    for (size_t j = 1; j + 1 < radii.size(); ++j) {
        const bool b = bulk[j - 1] - 2.0 * bulk[j] + bulk[j + 1] >= -1e-8 * std::max(bulk_scale, 1e-30);
        const bool s = surf[j - 1] - 2.0 * surf[j] + surf[j + 1] >= -1e-8 * std::max(surf_scale, 1e-30);
        probe.bulk_convex.push_back(b);
        probe.surface_convex.push_back(s);
        probe.all_pass = probe.all_pass && b && s;
    }
    for (size_t j = 0; j + 1 < radii.size(); ++j) {
        const bool up = surf[j + 1] / radii[j + 1] - surf[j] / radii[j] >=
                        -1e-8 * std::max(ratio_scale, 1e-30);
        probe.surface_over_r_up.push_back(up);
        probe.all_pass = probe.all_pass && up;
    }
    return probe;
}

} // namespace plap
