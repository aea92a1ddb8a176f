#include "colsafe/config.hpp"
#include "colsafe/errors.hpp"
#include "colsafe/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace colsafe;

int main(int argc, char** argv) {
    CLI::App app{"Safe exploration with Nadaraya-Watson confidence bounds"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> algorithm;
    std::optional<std::size_t> trials;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config")->required();
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--out", out_dir, "Override the output directory");
        sub->add_option("--algorithm", algorithm, "colsafe or gp-safeopt");
        sub->add_option("--trials", trials, "Monte-Carlo replicas for verify");
    };
    auto* run = app.add_subcommand("run", "Single run: trace.csv, summary.json, env.json");
    auto* sweep = app.add_subcommand("sweep", "Kernel x bandwidth grid: sweep.csv");
    auto* bench = app.add_subcommand("bench", "Update-time scaling of both algorithms");
    auto* verify = app.add_subcommand("verify", "Seeded replicas: safety and optimality report");
    for (auto* sub : {run, sweep, bench, verify}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitConfigError;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        apply_env_overrides(cfg);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.output_dir = *out_dir;
        if (algorithm) cfg.algorithm = algorithm_from_string(*algorithm);
        if (trials) cfg.trials = *trials;

        if (run->parsed()) {
            const int code = cmd_run(cfg);
            std::cout << (code == kExitSuccess ? "converged" : "iteration cap reached")
                      << "; artifacts in " << cfg.output_dir << "\n";
            return code;
        }
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (bench->parsed()) {
            BenchResult r;
            const int code = cmd_bench(cfg, &r);
            std::cout << "slope colsafe " << r.nw_slope << ", gp-safeopt " << r.gp_slope
                      << ", time ratio at n=" << r.sizes.back() << " " << r.ratio_at_max << "\n";
            return code;
        }
        VerifyReport r;
        const int code = cmd_verify(cfg, &r);
        std::cout << verify_json(r);
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
