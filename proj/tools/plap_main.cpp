#include "plap/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

void add_common_options(CLI::App* sub, plap::ExperimentConfig& cfg,
                        std::vector<std::pair<std::string, std::string>>& overrides,
                        std::string& config_path) {
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "mesh jitter seed (0 = no jitter)");
    sub->add_option("--p", cfg.p, "exponent p in (1, inf)");
    sub->add_option("--h", cfg.h, "target mesh edge length");
    sub->add_option(
        "--set",
        [&overrides](const std::vector<std::string>& kvs) {
            for (const std::string& kv : kvs) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) return false;
                overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
            return true;
        },
        "override any config key, e.g. --set n_theta=512")
        ->take_all();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Laplace frequency laboratory"};
    app.require_subcommand(1);

    plap::ExperimentConfig cfg;
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    const char* kinds[] = {"solve", "frequency", "verify", "doubling", "linearize", "probes",
                           "catalog"};
    const char* briefs[] = {"solve the Dirichlet problem and write the field",
                            "solve and write the radius profile of I, D, F",
                            "solve and check the identity and inequality suite",
                            "solve and scan the weak doubling window",
                            "ellipticity bounds and linearization residual for a catalog field",
                            "solve and report the growth/size probes",
                            "list the reference catalog with residual spot checks"};
    for (int k = 0; k < 7; ++k) {
        CLI::App* sub = app.add_subcommand(kinds[k], briefs[k]);
        add_common_options(sub, cfg, overrides, config_path);
        if (std::string(kinds[k]) == "linearize") {
            sub->add_option("--alpha", cfg.alpha, "affine slope a1,a2");
            sub->add_option("--field", cfg.boundary, "catalog field id");
        } else {
            sub->add_option("--boundary", cfg.boundary, "boundary data catalog id");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            plap::ExperimentConfig from_file = plap::ExperimentConfig::from_file(config_path);
            // command-line values win over the file
            from_file.kind = cfg.kind;
            if (app.count_all() > 1) {
                CLI::App* sub = app.get_subcommands().front();
                if (sub->count("--out")) from_file.out_dir = cfg.out_dir;
                if (sub->count("--seed")) from_file.seed = cfg.seed;
                if (sub->count("--p")) from_file.p = cfg.p;
                if (sub->count("--h")) from_file.h = cfg.h;
                if (sub->count("--alpha")) from_file.alpha = cfg.alpha;
                if (sub->count("--field") || sub->count("--boundary"))
                    from_file.boundary = cfg.boundary;
            }
            cfg = from_file;
        }
        cfg.kind = app.get_subcommands().front()->get_name();
        for (const auto& [key, value] : overrides) cfg.apply(key, value);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const plap::RunResult result = plap::run(cfg);
    if (result.exit_code == 0) std::cout << result.message << "\n";
    else std::cerr << "error: " << result.message << "\n";
    return result.exit_code;
}
