#pragma once

#include "plap/solver.hpp"

#include <cstdint>
#include <string>

namespace plap {

/// One experiment per invocation. Built from a flat key = value config file
/// plus command-line overrides; every numeric default is overridable.
struct ExperimentConfig {
    std::string kind = "solve"; // solve|frequency|verify|doubling|linearize|probes|catalog

    // domain and discretization
    std::string domain = "disc";
    double r_outer = 1.0;
    double r_inner = 0.0;
    double h = 0.02;
    std::uint64_t seed = 0; // mesh jitter seed, 0 = no jitter

    // problem
    double p = 2.0;
    std::string boundary = "affine:1,0,0"; // catalog id; doubles as linearize field id
    std::string boundary_csv;              // per-boundary-vertex values, "index,value" rows

    // radius window
    double center_x = 0.0;
    double center_y = 0.0;
    double r_b = 0.1;
    double R_b = 0.8;
    int grid = 64;
    int n_theta = 256;
    double rho = 0.0; // probes: outer Caccioppoli radius, 0 = R_b

    // linearize
    std::string alpha = "1,0";

    RegularizationSchedule schedule;
    SolverConfig solver;

    std::string out_dir = "out";

    static ExperimentConfig from_file(const std::string& path);
    void apply(const std::string& key, const std::string& value);
    void validate() const;

    /// Canonical dump of every setting; hashed into each emitted JSON.
    std::string canonical_text() const;
    std::string hash() const;
};

struct RunResult {
    int exit_code = 0; // 0 ok, 2 invalid config, 3 non-convergence, 4 invariant violation, 5 io
    std::string message;
};

RunResult run(const ExperimentConfig& config);

} // namespace plap
