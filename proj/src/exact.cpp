#include "plap/exact.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace plap {

namespace {

std::vector<double> parse_args(const std::string& id) {
    const auto colon = id.find(':');
    std::vector<double> args;
    if (colon == std::string::npos) return args;
    std::stringstream ss(id.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("catalog id '" + id + "': bad number '" + tok + "'");
        }
        if (used != tok.size())
            throw std::invalid_argument("catalog id '" + id + "': bad number '" + tok + "'");
        args.push_back(v);
    }
    return args;
}

} // namespace

ExactSolution ExactSolution::affine(Vec2 l, double l0) {
    ExactSolution s;
    s.kind_ = ExactKind::Affine;
    s.l_ = l;
    s.l0_ = l0;
    return s;
}

ExactSolution ExactSolution::harmonic_polynomial(int degree) {
    if (degree < 1) throw std::invalid_argument("harmonic polynomial degree must be >= 1");
    ExactSolution s;
    s.kind_ = ExactKind::HarmonicPolynomial;
    s.degree_ = degree;
    return s;
}

ExactSolution ExactSolution::radial_fundamental(double p, int n, Vec2 center) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("radial fundamental solution needs p in (1, inf)");
    if (n < 2) throw std::invalid_argument("radial fundamental solution needs n >= 2");
    ExactSolution s;
    s.kind_ = ExactKind::RadialFundamental;
    s.p_ = p;
    s.dim_ = n;
    s.center_ = center;
    return s;
}

ExactSolution ExactSolution::constant(double c) {
    ExactSolution s;
    s.kind_ = ExactKind::Constant;
    s.c_ = c;
    return s;
}

ExactSolution ExactSolution::parse(const std::string& id, double ambient_p) {
    const std::string name = id.substr(0, id.find(':'));
    const auto args = parse_args(id);
    if (name == "affine") {
        if (args.size() != 3)
            throw std::invalid_argument("catalog id 'affine' needs LX,LY,L0: got '" + id + "'");
        return affine({args[0], args[1]}, args[2]);
    }
    if (name == "harmpoly") {
        if (args.size() != 1 || args[0] != std::floor(args[0]))
            throw std::invalid_argument("catalog id 'harmpoly' needs an integer degree: got '" + id + "'");
        return harmonic_polynomial(static_cast<int>(args[0]));
    }
    if (name == "radial") {
        if (args.size() > 2)
            throw std::invalid_argument("catalog id 'radial' takes at most P,N: got '" + id + "'");
        const double p = args.empty() ? ambient_p : args[0];
        const int n = args.size() == 2 ? static_cast<int>(args[1]) : 2;
        return radial_fundamental(p, n);
    }
    if (name == "const") {
        if (args.size() != 1)
            throw std::invalid_argument("catalog id 'const' needs a value: got '" + id + "'");
        return constant(args[0]);
    }
    throw std::invalid_argument("unknown catalog id '" + id + "'");
}

double ExactSolution::value(Vec2 x) const {
    switch (kind_) {
    case ExactKind::Affine:
        return dot(l_, x) + l0_;
    case ExactKind::HarmonicPolynomial: {
        const std::complex<double> z(x.x, x.y);
        return std::pow(z, degree_).real();
    }
    case ExactKind::RadialFundamental: {
        const Vec2 d = x - center_;
        const double r = norm(d);
        if (r == 0.0)
            throw std::domain_error("radial fundamental solution evaluated at its singularity");
        if (p_ == static_cast<double>(dim_)) return std::log(r);
        const double beta = (p_ - dim_) / (p_ - 1.0);
        return std::pow(r, beta);
    }
    case ExactKind::Constant:
        return c_;
    }
    return 0.0;
}

Vec2 ExactSolution::gradient(Vec2 x) const {
    switch (kind_) {
    case ExactKind::Affine:
        return l_;
    case ExactKind::HarmonicPolynomial: {
        // u = Re(z^k): u_x = Re(k z^(k-1)), u_y = -Im(k z^(k-1))
        const std::complex<double> z(x.x, x.y);
        const std::complex<double> df =
            static_cast<double>(degree_) *
            (degree_ >= 2 ? std::pow(z, degree_ - 1) : std::complex<double>(1.0, 0.0));
        return {df.real(), -df.imag()};
    }
    case ExactKind::RadialFundamental: {
        const Vec2 d = x - center_;
        const double r = norm(d);
        if (r == 0.0)
            throw std::domain_error("radial fundamental solution evaluated at its singularity");
        if (p_ == static_cast<double>(dim_)) return (1.0 / (r * r)) * d;
        const double beta = (p_ - dim_) / (p_ - 1.0);
        return beta * std::pow(r, beta - 2.0) * d;
    }
    case ExactKind::Constant:
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

Sym2 ExactSolution::hessian(Vec2 x) const {
    switch (kind_) {
    case ExactKind::Affine:
    case ExactKind::Constant:
        return {0.0, 0.0, 0.0};
    case ExactKind::HarmonicPolynomial: {
        if (degree_ < 2) return {0.0, 0.0, 0.0};
        // u_xx = Re(f''), u_xy = -Im(f''), u_yy = -Re(f'')
        const std::complex<double> z(x.x, x.y);
        const std::complex<double> d2f =
            static_cast<double>(degree_) * static_cast<double>(degree_ - 1) *
            (degree_ >= 3 ? std::pow(z, degree_ - 2) : std::complex<double>(1.0, 0.0));
        return {d2f.real(), -d2f.imag(), -d2f.real()};
    }
    case ExactKind::RadialFundamental: {
        const Vec2 d = x - center_;
        const double r2 = norm2(d);
        if (r2 == 0.0)
            throw std::domain_error("radial fundamental solution evaluated at its singularity");
        if (p_ == static_cast<double>(dim_)) {
            const double a = 1.0 / r2;
            const double b = -2.0 / (r2 * r2);
            return {a + b * d.x * d.x, b * d.x * d.y, a + b * d.y * d.y};
        }
        const double r = std::sqrt(r2);
        const double beta = (p_ - dim_) / (p_ - 1.0);
        const double a = beta * std::pow(r, beta - 2.0);
        const double b = beta * (beta - 2.0) * std::pow(r, beta - 4.0);
        return {a + b * d.x * d.x, b * d.x * d.y, a + b * d.y * d.y};
    }
    }
    return {0.0, 0.0, 0.0};
}

bool ExactSolution::solves_for(double p) const {
    switch (kind_) {
    case ExactKind::Affine:
    case ExactKind::Constant:
        return true;
    case ExactKind::HarmonicPolynomial:
        return p == 2.0 || degree_ == 1;
    case ExactKind::RadialFundamental:
        return p == p_;
    }
    return false;
}

std::string ExactSolution::id() const {
    std::ostringstream os;
    switch (kind_) {
    case ExactKind::Affine:
        os << "affine:" << l_.x << "," << l_.y << "," << l0_;
        break;
    case ExactKind::HarmonicPolynomial:
        os << "harmpoly:" << degree_;
        break;
    case ExactKind::RadialFundamental:
        os << "radial:" << p_ << "," << dim_;
        break;
    case ExactKind::Constant:
        os << "const:" << c_;
        break;
    }
    return os.str();
}

PHarmonicCheck verify_p_harmonic(const ExactSolution& sol, double p,
                                 std::span<const Vec2> samples) {
    PHarmonicCheck check;
    for (const Vec2 x : samples) {
        const Vec2 g = sol.gradient(x);
        if (norm2(g) == 0.0) {
            ++check.skipped;
            continue;
        }
        const Sym2 hess = sol.hessian(x);
        const double residual = norm2(g) * hess.trace() + (p - 2.0) * hess.quad(g);
        check.max_residual = std::max(check.max_residual, std::abs(residual));
        ++check.evaluated;
    }
    return check;
}

} // namespace plap
