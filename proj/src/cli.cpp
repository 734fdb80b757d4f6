#include "plap/cli.hpp"

#include "plap/field.hpp"
#include "plap/frequency.hpp"
#include "plap/io.hpp"
#include "plap/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
    }
    if (used != value.size())
        throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v))
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
    return static_cast<long long>(v);
}

Vec2 parse_vec(const std::string& key, const std::string& value) {
    const auto comma = value.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("config key '" + key + "': expected 'x,y', got '" + value + "'");
    return {parse_double(key, trim(value.substr(0, comma))),
            parse_double(key, trim(value.substr(comma + 1)))};
}

struct Experiment {
    const ExperimentConfig& cfg;
    std::filesystem::path out;
    std::string config_hash;

    std::shared_ptr<const TriMesh> mesh;
    ScalarField field;
    SolveReport report;

    explicit Experiment(const ExperimentConfig& c) : cfg(c), out(c.out_dir), config_hash(c.hash()) {}

    void write_json(const std::string& name, nlohmann::json j) const {
        j["config_hash"] = config_hash;
        write_text_file((out / name).string(), j.dump(2) + "\n");
    }

    Domain domain() const {
        if (cfg.domain == "disc") return Domain::disc(cfg.r_outer);
        return Domain::annulus(cfg.r_inner, cfg.r_outer);
    }

    Vec2 window_center() const { return {cfg.center_x, cfg.center_y}; }

    std::vector<double> boundary_values() const {
        if (!cfg.boundary_csv.empty()) {
            std::istringstream is(read_text_file(cfg.boundary_csv));
            std::vector<double> values(mesh->vertex_count(), 0.0);
            std::vector<bool> seen(mesh->vertex_count(), false);
            std::string line;
            while (std::getline(is, line)) {
                line = trim(line);
                if (line.empty() || line[0] == '#') continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos)
                    throw std::invalid_argument("boundary csv: malformed row '" + line + "'");
                const long long v = parse_int("boundary_csv", trim(line.substr(0, comma)));
                if (v < 0 || v >= mesh->vertex_count())
                    throw std::invalid_argument("boundary csv: vertex index out of range: " + line);
                values[v] = parse_double("boundary_csv", trim(line.substr(comma + 1)));
                seen[v] = true;
            }
            for (int v = 0; v < mesh->vertex_count(); ++v)
                if (mesh->is_boundary(v) && !seen[v])
                    throw std::invalid_argument("boundary csv: no value for boundary vertex " +
                                                std::to_string(v));
            return values;
        }
        const ExactSolution sol = ExactSolution::parse(cfg.boundary, cfg.p);
        std::vector<double> values(mesh->vertex_count(), 0.0);
        for (int v = 0; v < mesh->vertex_count(); ++v)
            if (mesh->is_boundary(v)) values[v] = sol.value(mesh->vertex(v));
        return values;
    }

    /// mesh + solve + the solve artifacts shared by every solved experiment
    bool solve() {
        mesh = std::make_shared<const TriMesh>(build_mesh(domain(), cfg.h, cfg.seed));
        auto [u, rep] = picard_solve(mesh, boundary_values(), cfg.p, cfg.schedule, cfg.solver);
        field = std::move(u);
        report = std::move(rep);

        std::ostringstream mesh_os;
        write_mesh(mesh_os, *mesh);
        write_text_file((out / "mesh.txt").string(), mesh_os.str());
        std::ostringstream field_os;
        write_field_csv(field_os, field);
        write_text_file((out / "field.csv").string(), field_os.str());
        write_json("solve_report.json", to_json(report));
        return report.converged;
    }

    FrequencyProfile profile() const {
        FemField sampler(field);
        return compute_profile(sampler, cfg.p, window_center(), cfg.r_b, cfg.R_b, cfg.grid,
                               cfg.n_theta);
    }

    void write_profile(const FrequencyProfile& prof) const {
        std::ostringstream os;
        write_profile_csv(os, prof);
        write_text_file((out / "profile.csv").string(), os.str());
    }
};

RunResult run_solve(Experiment& ex) {
    if (!ex.solve()) return {3, ex.report.message};
    return {0, "solved: energy " + format_double(ex.report.energy)};
}

RunResult run_frequency(Experiment& ex) {
    if (!ex.solve()) return {3, ex.report.message};
    const FrequencyProfile prof = ex.profile();
    ex.write_profile(prof);
    std::ostringstream svg;
    emit_plot(svg, prof);
    write_text_file((ex.out / "profile.svg").string(), svg.str());
    int defined = 0;
    for (auto d : prof.F_defined) defined += d != 0;
    ex.write_json("frequency.json",
                  {{"p", prof.p},
                   {"r_b", ex.cfg.r_b},
                   {"R_b", ex.cfg.R_b},
                   {"grid", ex.cfg.grid},
                   {"n_theta", prof.n_theta},
                   {"F_defined_count", defined},
                   {"M", std::isfinite(prof.M) ? nlohmann::json(prof.M) : nlohmann::json("nan")}});
    return {0, "profile written"};
}

RunResult run_verify(Experiment& ex) {
    if (!ex.solve()) return {3, ex.report.message};
    const FrequencyProfile prof = ex.profile();
    ex.write_profile(prof);
    FemField sampler(ex.field);
    const Vec2 c = ex.window_center();

    double worst_identity = 0.0, worst_iprime_mismatch = 0.0;
    bool iprime_bound_ok = true, gradest_ok = true;
    std::ostringstream csv;
    csv << "r,identity_left,identity_right,identity_residual,iprime_formula,iprime_fd,"
           "iprime_bound_holds,gradest_lhs,gradest_rhs,gradest_holds\n";
    const double step = (ex.cfg.R_b - ex.cfg.r_b) / ex.cfg.grid;
    for (size_t j = 0; j < prof.radii.size(); ++j) {
        const double r = prof.radii[j];
        const IdentityRow row =
            energy_identity_residual(sampler, ex.cfg.p, c, r, ex.cfg.n_theta);
        worst_identity = std::max(worst_identity, row.residual);
        const InequalityCheck bound = I_prime_bound_check(sampler, ex.cfg.p, c, r, ex.cfg.n_theta);
        iprime_bound_ok = iprime_bound_ok && bound.holds;
        const InequalityCheck grad = grad_estimate_check(sampler, ex.cfg.p, c, r, ex.cfg.n_theta);
        gradest_ok = gradest_ok && grad.holds;

        double fd = std::numeric_limits<double>::quiet_NaN();
        if (j > 0 && j + 1 < prof.radii.size()) {
            fd = (prof.I[j + 1] - prof.I[j - 1]) / (2.0 * step);
            const double scale = std::max(std::abs(fd), prof.I[j] / r);
            if (scale > 0.0)
                worst_iprime_mismatch =
                    std::max(worst_iprime_mismatch, std::abs(prof.Iprime[j] - fd) / scale);
        }
        csv << format_double(r) << ',' << format_double(row.left) << ','
            << format_double(row.right) << ',' << format_double(row.residual) << ','
            << format_double(prof.Iprime[j]) << ',' << format_double(fd) << ','
            << (bound.holds ? 1 : 0) << ',' << format_double(grad.lhs) << ','
            << format_double(grad.rhs) << ',' << (grad.holds ? 1 : 0) << "\n";
    }
    write_text_file((ex.out / "verify.csv").string(), csv.str());
    ex.write_json("verify.json", {{"p", ex.cfg.p},
                                  {"worst_identity_residual", worst_identity},
                                  {"worst_iprime_mismatch", worst_iprime_mismatch},
                                  {"iprime_bound_all_hold", iprime_bound_ok},
                                  {"gradient_estimate_all_hold", gradest_ok}});
    if (!iprime_bound_ok) return {4, "derivative bound violated on the radius grid"};
    if (!gradest_ok) return {4, "gradient estimate violated on the radius grid"};
    return {0, "verification checks written"};
}

RunResult run_doubling(Experiment& ex) {
    if (!ex.solve()) return {3, ex.report.message};
    const FrequencyProfile prof = ex.profile();
    ex.write_profile(prof);
    const DoublingReport report = doubling_scan(prof);
    ex.write_json("doubling.json", to_json(report));
    if (!report.pass)
        return {4, "doubling ratio exceeded 4 on a profile with bounded frequency"};
    return {0, "doubling window verified: max ratio " + format_double(report.max_ratio)};
}

RunResult run_probes(Experiment& ex) {
    if (!ex.solve()) return {3, ex.report.message};
    FemField sampler(ex.field);
    const Vec2 c = ex.window_center();
    const double rho = ex.cfg.rho > 0.0 ? ex.cfg.rho : ex.cfg.R_b;

    std::ostringstream csv;
    csv << "r,A1,A2,caccioppoli,gamma_hat,C_hat\n";
    for (int j = 1; j <= ex.cfg.grid; ++j) {
        const double r = ex.cfg.r_b + (ex.cfg.R_b - ex.cfg.r_b) * j / ex.cfg.grid;
        const ConditionProbes cond = condition_probes(sampler, ex.cfg.p, c, r, ex.cfg.n_theta);
        const PoincareProbe poincare = poincare_probe(sampler, ex.cfg.p, c, r, ex.cfg.n_theta);
        csv << format_double(r) << ',' << format_double(cond.A1) << ','
            << format_double(cond.A2) << ',';
        if (r < rho)
            csv << format_double(caccioppoli_ratio(sampler, ex.cfg.p, c, r, rho, ex.cfg.n_theta));
        csv << ',' << format_double(poincare.gamma_hat) << ',' << format_double(poincare.C_hat)
            << "\n";
    }
    write_text_file((ex.out / "probes.csv").string(), csv.str());

    nlohmann::json j{{"p", ex.cfg.p}, {"rho", rho}};
    bool ok = true;
    if (ex.cfg.p == 2.0) {
        std::vector<double> radii;
        for (int k = 1; k <= ex.cfg.grid; ++k)
            radii.push_back(ex.cfg.r_b + (ex.cfg.R_b - ex.cfg.r_b) * k / ex.cfg.grid);
        const ConvexityProbe probe = convexity_probe(sampler, c, radii, ex.cfg.n_theta);
        j["convexity_all_pass"] = probe.all_pass;
        j["bulk_convex"] = probe.bulk_convex;
        j["surface_convex"] = probe.surface_convex;
        j["surface_over_r_up"] = probe.surface_over_r_up;
        ok = probe.all_pass;
    }
    ex.write_json("probes.json", j);
    if (!ok) return {4, "convexity probe failed on a harmonic field"};
    return {0, "probe report written"};
}

RunResult run_linearize(Experiment& ex) {
    const Vec2 alpha = parse_vec("alpha", ex.cfg.alpha);
    const EllipticityBounds bounds = ellipticity_bounds(alpha, ex.cfg.p);
    const ExactSolution sol = ExactSolution::parse(ex.cfg.boundary, ex.cfg.p);
    const C2Field u = c2_field(sol);

    std::mt19937_64 rng(0x5bd1e995u ^ ex.cfg.seed);
    std::uniform_real_distribution<double> radius(0.3, 0.9), angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Vec2> samples;
    for (int i = 0; i < 100; ++i) {
        const double r = radius(rng), th = angle(rng);
        samples.push_back({r * std::cos(th), r * std::sin(th)});
    }
    int flagged = 0;
    for (const Vec2 x : samples)
        if (norm2(sol.gradient(x)) == 0.0) ++flagged;
    const double residual = residual_affine_linearization(
        u, ExactSolution::affine(alpha, 0.0), ex.cfg.p, samples);

    ex.write_json("linearize.json", {{"alpha", {alpha.x, alpha.y}},
                                     {"p", ex.cfg.p},
                                     {"field", sol.id()},
                                     {"lambda_min", bounds.lambda_min},
                                     {"lambda_max", bounds.lambda_max},
                                     {"max_residual", residual},
                                     {"flagged_points", flagged}});
    return {0, "linearization record written"};
}

RunResult run_catalog(const ExperimentConfig& cfg) {
    std::mt19937_64 rng(20250811);
    std::uniform_real_distribution<double> radius(0.4, 0.95), angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Vec2> samples;
    for (int i = 0; i < 200; ++i) {
        const double r = radius(rng), th = angle(rng);
        samples.push_back({r * std::cos(th), r * std::sin(th)});
    }
    struct Entry {
        ExactSolution sol;
        double p;
    };
    const Entry entries[] = {
        {ExactSolution::affine({2, 0}, 1), cfg.p},
        {ExactSolution::affine({1, -1}, 0.5), cfg.p},
        {ExactSolution::harmonic_polynomial(1), 2.0},
        {ExactSolution::harmonic_polynomial(2), 2.0},
        {ExactSolution::harmonic_polynomial(3), 2.0},
        {ExactSolution::radial_fundamental(cfg.p), cfg.p},
        {ExactSolution::constant(1.0), cfg.p},
    };
    std::cout << "id                     p      max_residual   skipped\n";
    for (const Entry& e : entries) {
        const PHarmonicCheck check = verify_p_harmonic(e.sol, e.p, samples);
        std::printf("%-22s %-6g %-14.3e %d\n", e.sol.id().c_str(), e.p, check.max_residual,
                    check.skipped);
    }
    return {0, "catalog listed"};
}

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "kind") kind = value;
    else if (key == "domain") domain = value;
    else if (key == "r_outer") r_outer = parse_double(key, value);
    else if (key == "r_inner") r_inner = parse_double(key, value);
    else if (key == "h") h = parse_double(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "p") p = parse_double(key, value);
    else if (key == "boundary") boundary = value;
    else if (key == "boundary_csv") boundary_csv = value;
    else if (key == "center_x") center_x = parse_double(key, value);
    else if (key == "center_y") center_y = parse_double(key, value);
    else if (key == "r_b") r_b = parse_double(key, value);
    else if (key == "R_b") R_b = parse_double(key, value);
    else if (key == "grid") grid = static_cast<int>(parse_int(key, value));
    else if (key == "n_theta") n_theta = static_cast<int>(parse_int(key, value));
    else if (key == "rho") rho = parse_double(key, value);
    else if (key == "alpha") alpha = value;
    else if (key == "eps0") schedule.eps0 = parse_double(key, value);
    else if (key == "eps_factor") schedule.factor = parse_double(key, value);
    else if (key == "eps_min") schedule.eps_min = parse_double(key, value);
    else if (key == "picard_tol") solver.picard_tol = parse_double(key, value);
    else if (key == "residual_tol") solver.residual_tol = parse_double(key, value);
    else if (key == "linear_tol") solver.linear_tol = parse_double(key, value);
    else if (key == "max_outer") solver.max_outer = static_cast<int>(parse_int(key, value));
    else if (key == "max_inner") solver.max_inner = static_cast<int>(parse_int(key, value));
    else if (key == "out") out_dir = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> kinds = {"solve",    "frequency", "verify", "doubling",
                                                "linearize", "probes",   "catalog"};
    if (!kinds.count(kind)) throw std::invalid_argument("unknown experiment kind '" + kind + "'");
    if (domain != "disc" && domain != "annulus")
        throw std::invalid_argument("domain must be 'disc' or 'annulus'");
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1, inf)");
    if (kind == "catalog" || kind == "linearize") return;

    if (!(r_outer > 0.0)) throw std::invalid_argument("r_outer must be positive");
    if (domain == "annulus" && !(r_inner > 0.0 && r_inner < r_outer))
        throw std::invalid_argument("annulus needs 0 < r_inner < r_outer");
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    if (kind == "solve") return;

    if (!(r_b >= 0.0 && r_b < R_b && R_b < r_outer))
        throw std::invalid_argument("radius window needs 0 <= r_b < R_b < r_outer");
    if (grid < 8) throw std::invalid_argument("radius grid needs at least 8 points");
    if (n_theta < 64) throw std::invalid_argument("n_theta must be >= 64");
    const double off = norm(Vec2{center_x, center_y});
    if (off + R_b >= r_outer)
        throw std::invalid_argument("window circles reach past the outer boundary");
    if (domain == "annulus" && off - R_b <= r_inner)
        throw std::invalid_argument("window circles reach into the annulus hole");
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os << "kind = " << kind << "\ndomain = " << domain << "\nr_outer = " << format_double(r_outer)
       << "\nr_inner = " << format_double(r_inner) << "\nh = " << format_double(h)
       << "\nseed = " << seed << "\np = " << format_double(p) << "\nboundary = " << boundary
       << "\nboundary_csv = " << boundary_csv << "\ncenter_x = " << format_double(center_x)
       << "\ncenter_y = " << format_double(center_y) << "\nr_b = " << format_double(r_b)
       << "\nR_b = " << format_double(R_b) << "\ngrid = " << grid << "\nn_theta = " << n_theta
       << "\nrho = " << format_double(rho) << "\nalpha = " << alpha
       << "\neps0 = " << format_double(schedule.eps0)
       << "\neps_factor = " << format_double(schedule.factor)
       << "\neps_min = " << format_double(schedule.eps_min)
       << "\npicard_tol = " << format_double(solver.picard_tol)
       << "\nresidual_tol = " << format_double(solver.residual_tol)
       << "\nlinear_tol = " << format_double(solver.linear_tol)
       << "\nmax_outer = " << solver.max_outer << "\nmax_inner = " << solver.max_inner
       << "\nout = " << out_dir << "\n";
    return os.str();
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical_text()); }

RunResult run(const ExperimentConfig& config) {
    try {
        config.validate();
        if (config.kind == "catalog") return run_catalog(config);

        std::error_code ec;
        std::filesystem::create_directories(config.out_dir, ec);
        if (ec || !std::filesystem::is_directory(config.out_dir))
            throw IoError("cannot create output directory '" + config.out_dir + "'");

        Experiment ex(config);
        if (config.kind == "solve") return run_solve(ex);
        if (config.kind == "frequency") return run_frequency(ex);
        if (config.kind == "verify") return run_verify(ex);
        if (config.kind == "doubling") return run_doubling(ex);
        if (config.kind == "probes") return run_probes(ex);
        return run_linearize(ex);
    } catch (const IoError& e) {
        return {5, e.what()};
    } catch (const std::invalid_argument& e) {
        return {2, e.what()};
    } catch (const std::domain_error& e) {
        return {2, e.what()};
    } catch (const std::exception& e) {
        return {2, std::string("experiment failed: ") + e.what()};
    }
}

} // namespace plap
