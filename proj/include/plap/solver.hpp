#pragma once

#include "plap/exact.hpp"
#include "plap/mesh.hpp"
#include "plap/sparse.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace plap {

/// Continuation schedule for the regularized energy: stages run
/// eps0, eps0*factor, ... down to (at most) eps_min.
struct RegularizationSchedule {
    double eps0 = 1e-1;
    double factor = 1e-1;
    double eps_min = 1e-8;

    void validate() const;
};

struct SolverConfig {
    double picard_tol = 1e-10;   // relative energy-decrease stagnation tolerance
    double residual_tol = 1e-8;  // target for the weak-form residual norm
    double linear_tol = 1e-12;   // inner conjugate-gradient relative tolerance
    int max_outer = 16;          // continuation stage budget
    int max_inner = 200;         // iterations per stage

    void validate() const;
};

struct StageRecord {
    double eps = 0.0;
    std::vector<double> energies; // regularized energy after each accepted iterate
    int iterations = 0;
    double residual = 0.0; // weak-form residual at stage end
};

struct SolveReport {
    double p = 2.0;
    std::vector<StageRecord> stages;
    double energy = 0.0;   // final p-Dirichlet energy (eps = 0)
    double residual = 0.0; // final weak-form residual norm
    int iterations = 0;    // total inner iterations
    bool converged = false;
    std::string message;
};

/// Integral of (|grad u|^2 + eps)^(p/2) over the mesh, element by element.
double regularized_energy(const ScalarField& field, double p, double eps);

/// Stiffness system weighted by (|grad u|^2 + eps)^(p/2-1), frozen at the
/// current iterate, restricted to interior unknowns with Dirichlet columns
/// moved to the right-hand side. Throws when any element weight degenerates
/// (zero gradient with eps = 0).
struct DirichletSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> interior;         // unknown index -> vertex
    std::vector<int> unknown_of_vertex; // vertex -> unknown index or -1
};

DirichletSystem assemble_weighted_stiffness(const ScalarField& state, double p, double eps);

/// Max over interior nodal hat functions of the discrete p-Laplace weak form,
/// normalized by the field's p-Dirichlet energy. Elements with zero gradient
/// contribute zero flux (the p < 2 limit).
double weak_residual_norm(const ScalarField& field, double p);

/// Single linear solve with unit weights (the p = 2 problem).
ScalarField solve_laplace(std::shared_ptr<const TriMesh> mesh,
                          const std::vector<double>& boundary_values, double linear_tol);

/// Minimizes the regularized p-Dirichlet energy by damped fixed-point
/// (frozen-coefficient) iterations inside an eps-continuation loop.
/// `boundary_values` is read at boundary vertices only. The continuation may
/// run past eps_min (within max_outer) when the weak-form residual has not yet
/// met residual_tol; non-convergence is reported, never silently truncated.
std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const std::vector<double>& boundary_values,
                                                 double p,
                                                 const RegularizationSchedule& schedule = {},
                                                 const SolverConfig& config = {});

std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const std::function<double(Vec2)>& boundary_data,
                                                 double p,
                                                 const RegularizationSchedule& schedule = {},
                                                 const SolverConfig& config = {});

std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const ExactSolution& boundary_data, double p,
                                                 const RegularizationSchedule& schedule = {},
                                                 const SolverConfig& config = {});

} // namespace plap
