#include "plap/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace plap {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
}

double& CsrMatrix::at(int row, int column) {
    for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
        if (col[k] == column) return val[k];
    throw std::logic_error("csr entry outside the assembled pattern");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

CgResult pcg_solve(const CsrMatrix& A, std::span<const double> b, std::span<double> x,
                   double rel_tol, int max_iter) {
    const int n = A.n;
    std::vector<double> r(n), z(n), p(n), q(n), dinv(n);
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            if (A.col[k] == i) d = A.val[k];
        dinv[i] = d > 0.0 ? 1.0 / d : 1.0;
    }

    A.multiply(x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];

    const double r0 = std::sqrt(dot(r, r));
    const double b_norm = std::sqrt(dot(b, b));
    const double target = std::max(rel_tol * r0, 64.0 * 1e-16 * std::max(b_norm, r0));
    CgResult res;
    res.residual_norm = r0;
    if (r0 <= target || r0 == 0.0) {
        res.converged = true;
        return res;
    }

    for (int i = 0; i < n; ++i) p[i] = z[i] = dinv[i] * r[i];
    double rho = dot(r, z);
    double best = r0;
    int stalled = 0;

    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) break; // matrix not SPD or rounding breakdown
        const double alpha = rho / pq;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        const double rn = std::sqrt(dot(r, r));
        res.iterations = it;
        res.residual_norm = rn;
        if (rn <= target) {
            res.converged = true;
            return res;
        }
        if (rn < 0.9 * best) {
            best = rn;
            stalled = 0;
        } else if (++stalled > 100) {
            break; // rounding floor reached
        }
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.converged = res.residual_norm <= std::max(target, 1e-10 * std::max(1.0, b_norm));
    return res;
}

} // namespace plap
