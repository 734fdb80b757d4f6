#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

struct ElementGeom {
    int v[3];
    double area;
    Vec2 gphi[3]; // gradients of the three hat functions
};

std::vector<ElementGeom> element_geometry(const TriMesh& mesh) {
    std::vector<ElementGeom> elems(mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Tri tr = mesh.triangle(t);
        const Vec2 p0 = mesh.vertex(tr.v0), p1 = mesh.vertex(tr.v1), p2 = mesh.vertex(tr.v2);
        const double two_area = cross(p1 - p0, p2 - p0);
        ElementGeom e;
        e.v[0] = tr.v0;
        e.v[1] = tr.v1;
        e.v[2] = tr.v2;
        e.area = 0.5 * two_area;
        e.gphi[0] = (1.0 / two_area) * rot90(p2 - p1);
        e.gphi[1] = (1.0 / two_area) * rot90(p0 - p2);
        e.gphi[2] = (1.0 / two_area) * rot90(p1 - p0);
        elems[t] = e;
    }
    return elems;
}

Vec2 element_grad(const ElementGeom& e, const std::vector<double>& values) {
    return values[e.v[0]] * e.gphi[0] + values[e.v[1]] * e.gphi[1] + values[e.v[2]] * e.gphi[2];
}

/// Stiffness assembly workspace with a fixed interior-unknown pattern.
struct Assembler {
    explicit Assembler(const TriMesh& mesh) : elems(element_geometry(mesh)) {
        unknown_of_vertex.assign(mesh.vertex_count(), -1);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (!mesh.is_boundary(v)) {
                unknown_of_vertex[v] = static_cast<int>(interior.size());
                interior.push_back(v);
            }
        }
        const int n = static_cast<int>(interior.size());
        std::vector<std::vector<int>> adjacency(n);
        for (const ElementGeom& e : elems) {
            for (int a = 0; a < 3; ++a) {
                const int ra = unknown_of_vertex[e.v[a]];
                if (ra < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    const int rb = unknown_of_vertex[e.v[b]];
                    if (rb >= 0) adjacency[ra].push_back(rb);
                }
            }
        }
        matrix.n = n;
        matrix.row_ptr.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) {
            auto& row = adjacency[i];
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            matrix.row_ptr[i + 1] = matrix.row_ptr[i] + static_cast<int>(row.size());
            matrix.col.insert(matrix.col.end(), row.begin(), row.end());
        }
        matrix.val.assign(matrix.col.size(), 0.0);
        rhs.assign(n, 0.0);
    }

    void assemble(const std::vector<double>& values, double p, double eps, bool unit_weights) {
        std::fill(matrix.val.begin(), matrix.val.end(), 0.0);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        const double expo = 0.5 * p - 1.0;
        for (size_t t = 0; t < elems.size(); ++t) {
            const ElementGeom& e = elems[t];
            double w = 1.0;
            if (!unit_weights && p != 2.0) {
                w = std::pow(norm2(element_grad(e, values)) + eps, expo);
                if (!std::isfinite(w) || w <= 0.0) {
                    std::ostringstream os;
                    os << "element " << t << ": degenerate coefficient weight " << w
                       << " (p = " << p << ", eps = " << eps << ")";
                    throw std::domain_error(os.str());
                }
            }
            for (int a = 0; a < 3; ++a) {
                const int ra = unknown_of_vertex[e.v[a]];
                if (ra < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    const double k = w * e.area * dot(e.gphi[a], e.gphi[b]);
                    const int rb = unknown_of_vertex[e.v[b]];
                    if (rb >= 0) matrix.at(ra, rb) += k;
                    else rhs[ra] -= k * values[e.v[b]];
                }
            }
        }
    }

    std::vector<ElementGeom> elems;
    std::vector<int> interior;
    std::vector<int> unknown_of_vertex;
    CsrMatrix matrix;
    std::vector<double> rhs;
};

void check_boundary_values(const TriMesh& mesh, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != mesh.vertex_count())
        throw std::invalid_argument("boundary value vector must have one entry per vertex");
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_boundary(v) && !std::isfinite(values[v]))
            throw std::invalid_argument("boundary value at vertex " + std::to_string(v) +
                                        " is not finite");
}

std::vector<double> boundary_vector(const TriMesh& mesh, const std::function<double(Vec2)>& f) {
    std::vector<double> values(mesh.vertex_count(), 0.0);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_boundary(v)) values[v] = f(mesh.vertex(v));
    return values;
}

ScalarField laplace_via(Assembler& ws, std::shared_ptr<const TriMesh> mesh,
                        const std::vector<double>& boundary_values, double linear_tol) {
    ScalarField u;
    u.values.assign(mesh->vertex_count(), 0.0);
    for (int v = 0; v < mesh->vertex_count(); ++v)
        if (mesh->is_boundary(v)) u.values[v] = boundary_values[v];
    u.mesh = std::move(mesh);

    ws.assemble(u.values, 2.0, 0.0, true);
    std::vector<double> x(ws.interior.size(), 0.0);
    pcg_solve(ws.matrix, ws.rhs, x, linear_tol, 5 * static_cast<int>(x.size()) + 100);
    for (size_t i = 0; i < ws.interior.size(); ++i) u.values[ws.interior[i]] = x[i];
    return u;
}

} // namespace

void RegularizationSchedule::validate() const {
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("schedule needs eps0 in (0,1)");
    if (!(factor > 0.0 && factor < 1.0)) throw std::invalid_argument("schedule needs factor in (0,1)");
    if (!(eps_min > 0.0 && eps_min <= eps0))
        throw std::invalid_argument("schedule needs 0 < eps_min <= eps0");
}

void SolverConfig::validate() const {
    if (!(picard_tol > 0.0 && residual_tol > 0.0 && linear_tol > 0.0))
        throw std::invalid_argument("solver tolerances must be positive");
    if (max_outer < 1 || max_inner < 1)
        throw std::invalid_argument("solver iteration budgets must be >= 1");
}

double regularized_energy(const ScalarField& field, double p, double eps) {
    if (eps < 0.0) throw std::invalid_argument("regularized energy needs eps >= 0");
    const auto elems = element_geometry(*field.mesh);
    double total = 0.0;
    for (const ElementGeom& e : elems)
        total += e.area * std::pow(norm2(element_grad(e, field.values)) + eps, 0.5 * p);
    return total;
}

DirichletSystem assemble_weighted_stiffness(const ScalarField& state, double p, double eps) {
    if (eps < 0.0) throw std::invalid_argument("assembly needs eps >= 0");
    Assembler ws(*state.mesh);
    ws.assemble(state.values, p, eps, false);
    DirichletSystem sys;
    sys.matrix = std::move(ws.matrix);
    sys.rhs = std::move(ws.rhs);
    sys.interior = std::move(ws.interior);
    sys.unknown_of_vertex = std::move(ws.unknown_of_vertex);
    return sys;
}

double weak_residual_norm(const ScalarField& field, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("weak residual needs p > 1");
    const TriMesh& mesh = *field.mesh;
    const auto elems = element_geometry(mesh);
    std::vector<double> r(mesh.vertex_count(), 0.0);
    double energy = 0.0;
    for (const ElementGeom& e : elems) {
        const Vec2 g = element_grad(e, field.values);
        const double g2 = norm2(g);
        if (g2 == 0.0) continue; // degenerate flux limit
        const double flux_mag = std::pow(g2, 0.5 * (p - 2.0));
        energy += e.area * std::pow(g2, 0.5 * p);
        for (int a = 0; a < 3; ++a)
            r[e.v[a]] += e.area * flux_mag * dot(g, e.gphi[a]);
    }
    double worst = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.is_boundary(v)) worst = std::max(worst, std::abs(r[v]));
    if (energy == 0.0) return 0.0;
    return worst / energy;
}

ScalarField solve_laplace(std::shared_ptr<const TriMesh> mesh,
                          const std::vector<double>& boundary_values, double linear_tol) {
    check_boundary_values(*mesh, boundary_values);
    Assembler ws(*mesh);
    return laplace_via(ws, std::move(mesh), boundary_values, linear_tol);
}

std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const std::vector<double>& boundary_values,
                                                 double p, const RegularizationSchedule& schedule,
                                                 const SolverConfig& config) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("picard_solve needs p in (1, inf)");
    schedule.validate();
    config.validate();
    check_boundary_values(*mesh, boundary_values);

    SolveReport report;
    report.p = p;
    Assembler ws(*mesh);

    if (p == 2.0) {
        // the regularization weight is identically 1: a single linear solve
        ScalarField u = laplace_via(ws, mesh, boundary_values, config.linear_tol);
        StageRecord st;
        st.eps = schedule.eps0;
        st.energies.push_back(regularized_energy(u, p, st.eps));
        st.iterations = 1;
        st.residual = weak_residual_norm(u, p);
        report.stages.push_back(st);
        report.iterations = 1;
        report.energy = regularized_energy(u, p, 0.0);
        report.residual = st.residual;
        report.converged = report.residual <= config.residual_tol;
        if (!report.converged) report.message = "linear solve left weak residual above tolerance";
        return {std::move(u), std::move(report)};
    }

    ScalarField u = laplace_via(ws, mesh, boundary_values, config.linear_tol);

    bool converged = false;
    double eps = schedule.eps0;
    std::vector<double> x(ws.interior.size(), 0.0);
    std::vector<double> candidate(u.values.size(), 0.0);

    for (int stage_idx = 0; stage_idx < config.max_outer && !converged; ++stage_idx) {
        const bool final_band = eps <= schedule.eps_min * (1.0 + 1e-12);
        StageRecord st;
        st.eps = eps;
        double energy = regularized_energy(u, p, eps);
        st.energies.push_back(energy);

        for (int it = 0; it < config.max_inner; ++it) {
            ws.assemble(u.values, p, eps, false);
            for (size_t i = 0; i < ws.interior.size(); ++i) x[i] = u.values[ws.interior[i]];
            pcg_solve(ws.matrix, ws.rhs, x, config.linear_tol,
                      5 * static_cast<int>(x.size()) + 100);

            // the frozen-coefficient step is a descent direction for the
            // regularized energy; backtrack until the energy does not increase
            double accepted_energy = energy;
            double t = 1.0;
            bool moved = false;
            while (t >= 1e-10) {
                candidate = u.values;
                for (size_t i = 0; i < ws.interior.size(); ++i) {
                    const int v = ws.interior[i];
                    candidate[v] = u.values[v] + t * (x[i] - u.values[v]);
                }
                ScalarField trial{u.mesh, candidate};
                const double e_trial = regularized_energy(trial, p, eps);
                if (e_trial <= energy) {
                    u.values = candidate;
                    accepted_energy = e_trial;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }

            const double decrease = energy - accepted_energy;
            energy = accepted_energy;
            st.energies.push_back(energy);
            ++st.iterations;
            ++report.iterations;

            if (final_band) {
                const double res = weak_residual_norm(u, p);
                st.residual = res;
                if (res <= config.residual_tol) {
                    converged = true;
                    break;
                }
            }
            if (!moved || decrease <= config.picard_tol * std::max(1.0, std::abs(energy)))
                break; // stage stagnated at its minimizer
        }

        if (st.residual == 0.0 && !converged) st.residual = weak_residual_norm(u, p);
        report.stages.push_back(std::move(st));
        eps *= schedule.factor;
    }

    report.energy = regularized_energy(u, p, 0.0);
    report.residual = weak_residual_norm(u, p);
    report.converged = converged;
    if (!converged) {
        std::ostringstream os;
        os << "continuation exhausted " << report.stages.size() << " stages (last eps "
           << report.stages.back().eps << ") with weak residual " << report.residual
           << " > tolerance " << config.residual_tol;
        report.message = os.str();
    }
    return {std::move(u), std::move(report)};
}

std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const std::function<double(Vec2)>& boundary_data,
                                                 double p, const RegularizationSchedule& schedule,
                                                 const SolverConfig& config) {
    auto values = boundary_vector(*mesh, boundary_data);
    return picard_solve(std::move(mesh), values, p, schedule, config);
}

std::pair<ScalarField, SolveReport> picard_solve(std::shared_ptr<const TriMesh> mesh,
                                                 const ExactSolution& boundary_data, double p,
                                                 const RegularizationSchedule& schedule,
                                                 const SolverConfig& config) {
    auto values =
        boundary_vector(*mesh, [&](Vec2 x) { return boundary_data.value(x); });
    return picard_solve(std::move(mesh), values, p, schedule, config);
}

} // namespace plap
