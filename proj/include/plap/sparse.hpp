#pragma once

#include <span>
#include <vector>

namespace plap {

/// Compressed sparse row matrix with a fixed symmetric pattern.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Entry accumulator: requires (row, column) to exist in the pattern.
    double& at(int row, int column);
};

struct CgResult {
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients. `x` holds the warm start on
/// entry and the solution on exit; convergence is relative to the initial
/// residual of this solve, with a rounding-level absolute floor. Fully
/// deterministic.
CgResult pcg_solve(const CsrMatrix& A, std::span<const double> b, std::span<double> x,
                   double rel_tol, int max_iter);

} // namespace plap
