// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Paths are relative to the source tree (COLSAFE_SOURCE_DIR).

#include "../support.hpp"
#include "colsafe/bounds.hpp"
#include "colsafe/config.hpp"
#include "colsafe/experiment.hpp"
#include "colsafe/model.hpp"
#include "colsafe/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace colsafe;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = COLSAFE_SOURCE_DIR;

// Invariant counters gathered from every explorer run in this harness.
InvariantReport g_invariants;
std::size_t g_runs = 0;
// Verify reports only carry totals, not the per-kind split.
std::size_t g_other_failures = 0;

void absorb(const InvariantReport& r) {
    ++g_runs;
    g_invariants.checks += r.checks;
    g_invariants.upper_increased += r.upper_increased;
    g_invariants.lower_decreased += r.lower_decreased;
    g_invariants.width_increased += r.width_increased;
    g_invariants.safe_shrunk += r.safe_shrunk;
    g_invariants.candidates_grew += r.candidates_grew;
    g_invariants.sampled_outside_candidates += r.sampled_outside_candidates;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("colsafe_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

int report(int id, const std::string& name, const std::function<Verdict()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = Verdict{false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << (v.pass ? "PASS " : "FAIL ") << id << " " << name << ": " << v.detail << " ["
         << static_cast<int>(secs + 0.5) << "s]";
    std::cout << line.str() << std::endl;
    return v.pass ? 0 : 1;
}

ExperimentConfig bench_config(const std::string& name, std::size_t resolution, double lambda,
                              double beta_bar, double noise_sigma) {
    const auto b = make_benchmark(name, resolution);
    ExperimentConfig c;
    c.benchmark = name;
    c.resolution = resolution;
    c.kernel = KernelSpec::box(lambda);
    c.lipschitz = b.suggested.lipschitz;
    c.sigma = std::max(noise_sigma, 0.01);
    c.delta = 0.05;
    c.noise = NoiseModel{NoiseKind::Gaussian, noise_sigma};
    c.beta_bar = beta_bar;
    c.trace_timing = false;
    c.workers = 1;
    return c;
}

struct Case {
    std::string name;
    std::size_t resolution;
    double lambda;
    double beta_bar;
};

Verdict safety() {
    auto cfg = load_config((kSource / "configs/2d-quadratic.json").string());
    const VerifyReport r = run_verify(cfg);
    g_runs += r.trials;
    g_invariants.checks += r.invariant_checks;
    g_other_failures += r.invariant_failures;
    std::ostringstream d;
    d << r.violation_runs << "/" << r.trials << " trials with a true violation (fraction "
      << r.violation_fraction << ", bound " << r.violation_bound << ")";
    return {r.trials == 200 && r.violation_fraction <= r.violation_bound, d.str()};
}

Verdict optimality() {
    const std::vector<Case> cases{{"1d-linear", 0, 0.05, 0.1},
                                  {"2d-quadratic", 21, 0.12, 0.25},
                                  {"2d-vector-constraint", 21, 0.12, 0.2},
                                  {"disjoint-region", 21, 0.12, 0.14}};
    std::size_t checked = 0, passed = 0, not_converged = 0, skipped = 0;
    std::string worst;
    for (const auto& c : cases) {
        for (double noise : {0.0, 0.01}) {
            const int seeds = noise == 0.0 ? 1 : 3;
            for (int s = 0; s < seeds; ++s) {
                auto cfg = bench_config(c.name, c.resolution, c.lambda, c.beta_bar, noise);
                cfg.seed = 100 + s;
                cfg.max_iterations = 5000;
                const auto bench = prepare_benchmark(cfg);
                const auto oracle = compute_oracle(cfg, bench);
                const auto out = run_experiment(cfg, bench, oracle);
                absorb(out.result.invariants);
                if (out.result.reason != StopReason::Converged) {
                    ++not_converged;
                    continue;
                }
                if (out.result.violations > 0) {
                    ++skipped;
                    continue;
                }
                ++checked;
                if (out.optimal) {
                    ++passed;
                } else {
                    worst = c.name;
                }
            }
        }
    }
    std::ostringstream d;
    d << passed << "/" << checked << " converged runs reach the safe optimum within 2 beta_bar";
    if (skipped) d << ", " << skipped << " skipped for violation events";
    if (not_converged) d << ", " << not_converged << " not converged";
    if (!worst.empty()) d << ", failing on " << worst;
    return {checked > 0 && passed == checked, d.str()};
}

Verdict termination() {
    const std::vector<Case> cases{{"1d-linear", 0, 0.05, 0.1},
                                  {"2d-quadratic", 11, 0.1, 0.25},
                                  {"2d-vector-constraint", 11, 0.1, 0.2},
                                  {"disjoint-region", 11, 0.1, 0.14}};
    std::size_t runs = 0, stopped = 0, longest = 0;
    for (const auto& c : cases) {
        for (double noise : {0.0, 0.01}) {
            for (int s = 0; s < 3; ++s) {
                auto cfg = bench_config(c.name, c.resolution, c.lambda, c.beta_bar, noise);
                cfg.seed = 200 + s;
                const auto bench = prepare_benchmark(cfg);
                const std::size_t A = bench.env.grid().size();
                if (A > 200) throw std::logic_error("termination grid exceeds 200 points");
                const auto budget = n_beta_bar(bound_config(cfg, bench.env), cfg.beta_bar);
                cfg.max_iterations = (A + 1) * budget * A;
                const auto out = run_experiment(cfg, bench, OracleInfo{});
                absorb(out.result.invariants);
                ++runs;
                if (out.result.reason == StopReason::Converged) ++stopped;
                longest = std::max(longest, out.result.iterations);
            }
        }
    }
    std::ostringstream d;
    d << stopped << "/" << runs << " runs stopped by the convergence rule (longest " << longest
      << " iterations)";
    return {stopped == runs, d.str()};
}

Verdict coverage() {
    const auto b = make_benchmark("1d-linear");
    auto env = b.env;
    env.set_noise(NoiseModel{NoiseKind::Gaussian, 0.1});
    BoundConfig bc;
    bc.lipschitz = 1.0;
    bc.lambda = 0.05;
    bc.sigma = 0.1;
    bc.delta = 0.05;
    bc.domain_size = env.grid().size();
    bc.output_dims = env.output_dims();
    const auto kernel = KernelSpec::box(bc.lambda);
    const std::size_t a = 14;
    std::ostringstream d;
    bool ok = true;
    for (std::size_t n : {1, 5, 20}) {
        std::size_t hits = 0;
        const std::size_t trials = 1000;
        for (std::size_t t = 0; t < trials; ++t) {
            SampleStore store(1, env.output_dims(), bc.lambda);
            NoiseStream stream(4242 + n, t);
            for (std::size_t k = 0; k < n; ++k) store.add_sample(env.grid().point(a), env.observe(a, stream));
            const auto p = env.grid().point(a);
            const double kappa = store.kappa(kernel, p);
            bool inside = true;
            for (std::size_t i = 0; i < env.output_dims().size(); ++i) {
                const auto mu = *store.mu(kernel, p, i);
                const auto truth = env.truth(a).values[i];
                double sq = 0.0;
                for (std::size_t c = 0; c < mu.size(); ++c) sq += (mu[c] - truth[c]) * (mu[c] - truth[c]);
                inside = inside && std::sqrt(sq) <= beta(bc, kappa, i);
            }
            if (inside) ++hits;
        }
        const double freq = static_cast<double>(hits) / trials;
        ok = ok && freq >= 0.95;
        d << "N=" << n << ": " << freq << "  ";
    }
    return {ok, d.str()};
}

double bound_oracle(const BoundConfig& c, double n) {
    const double nx = n * c.kernel_lower;
    const double a1 = std::sqrt(std::log(std::sqrt(2.0) * c.domain_size / c.delta));
    const double a2 = std::sqrt(nx * std::log(std::sqrt(1.0 + nx) * c.domain_size / c.delta));
    return c.lipschitz * c.lambda + 2.0 * c.sigma * std::max(a1, a2) / nx;
}

Verdict sample_budget() {
    support::Rng rng(5150);
    std::size_t agree = 0, minimal = 0;
    for (int k = 0; k < 50; ++k) {
        BoundConfig c;
        c.lipschitz = rng.uniform(0.1, 2.0);
        c.lambda = rng.uniform(0.01, 0.3);
        c.sigma = rng.uniform(0.001, 0.2);
        c.delta = rng.uniform(0.01, 0.3);
        c.domain_size = 1 + rng.index(10000);
        c.kernel_lower = rng.uniform(0.05, 1.0);
        const double target = c.lipschitz * c.lambda + rng.uniform(0.01, 1.0);
        std::uint64_t scan = 1;
        while (bound_oracle(c, static_cast<double>(scan)) > target) ++scan;
        const auto n = n_beta_bar(c, target);
        if (n == scan) ++agree;
        if (beta_bar_bound(c, n) <= target && (n == 1 || beta_bar_bound(c, n - 1) > target)) ++minimal;
    }
    std::ostringstream d;
    d << agree << "/50 match the linear scan, " << minimal << "/50 bounded and minimal";
    return {agree == 50 && minimal == 50, d.str()};
}

Verdict set_oracles() {
    support::Rng rng(777);
    std::size_t match = 0;
    const std::size_t instances = 100;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto g = support::random_grid(rng, 200);
        Thresholds c;
        for (std::size_t i = 0, q = 1 + rng.index(3); i < q; ++i) c.push_back(rng.uniform(0.0, 1.0));
        const double L = rng.uniform(0.1, 4.0);
        const auto t = support::random_table(rng, g, c, L);
        const auto prev = support::random_subset(rng, g.size(), rng.uniform(0.02, 0.5), true);
        const SetCalculator calc(g, L, c);
        const auto s = calc.safe_set(prev, t);
        bool ok = s == support::naive_safe_set(g, prev, t, L, c);
        ok = ok && calc.maximizers(s, t) == support::naive_maximizers(s, t);
        ok = ok && calc.expanders(s, t) == support::naive_expanders(g, s, t, L, c);
        ok = ok && calc.expanders(prev, t) == support::naive_expanders(g, prev, t, L, c);

        auto p = support::random_problem(rng, 200);
        const auto params = reachability_params(p.bench.env, p.beta_bar * rng.uniform(0.1, 1.0), p.lipschitz);
        ok = ok && reachability_closure(p.bench.env, params, p.bench.seed_set) ==
                       support::naive_closure(p.bench.env, params, p.bench.seed_set);
        if (ok) ++match;
    }
    std::ostringstream d;
    d << match << "/" << instances << " instances match the brute-force comprehensions";
    return {match == instances, d.str()};
}

Verdict monotonicity() {
    support::Rng rng(31337);
    for (int k = 0; k < 40; ++k) {
        auto p = support::random_problem(rng, 150);
        const auto& env = p.bench.env;
        BoundConfig bc;
        bc.lipschitz = p.lipschitz;
        bc.lambda = p.lambda;
        bc.sigma = std::max(p.sigma, 1e-3);
        bc.domain_size = env.grid().size();
        bc.output_dims = env.output_dims();
        const auto kernel = rng.coin(0.5) ? KernelSpec::box(p.lambda)
                                          : KernelSpec::truncated_matern(p.lambda, 1.5, 0.5);
        bc.kernel_lower = kernel.lower / kernel.upper;
        EnvSource src(env, 9000 + k);
        ExplorerOptions opts;
        opts.time_updates = false;
        SafeExplorer ex(env.grid(), p.lipschitz, env.thresholds(), p.bench.seed_set,
                        std::make_unique<NadarayaWatsonModel>(env.grid(), kernel, bc), src, opts);
        absorb(ex.run(StoppingConfig{p.beta_bar, 200, true}).invariants);
    }
    std::ostringstream d;
    const std::size_t total = g_invariants.failures() + g_other_failures;
    d << total << " violations over " << g_invariants.checks << " steps in "
      << g_runs << " runs (u+" << g_invariants.upper_increased << " l-" << g_invariants.lower_decreased
      << " w+" << g_invariants.width_increased << " S-" << g_invariants.safe_shrunk << " MG+"
      << g_invariants.candidates_grew << ")";
    return {total == 0 && g_invariants.checks > 0, d.str()};
}

Verdict scaling() {
    auto cfg = load_config((kSource / "configs/bench.json").string());
    const auto r = run_bench(cfg);
    std::ostringstream d;
    d << "slope gp " << r.gp_slope << " (>= 1.8), colsafe " << r.nw_slope
      << " (<= 1.2), ratio at n=" << r.sizes.back() << " " << r.ratio_at_max << " (< 0.1)";
    return {r.gp_slope >= 1.8 && r.nw_slope <= 1.2 && r.ratio_at_max < 0.1, d.str()};
}

Verdict sweep() {
    auto cfg = load_config((kSource / "configs/sweep.json").string());
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    cfg.output_dir = a.string();
    cmd_sweep(cfg);
    cfg.output_dir = b.string();
    cmd_sweep(cfg);
    const auto csv = slurp(a / "sweep.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    const bool header = line == "kernel,lambda,n,f_best";
    std::size_t rows = 0, box1 = 0;
    while (std::getline(lines, line)) {
        ++rows;
        if (line.rfind("box,1,", 0) == 0) ++box1;
    }
    const bool same = csv == slurp(b / "sweep.csv");
    std::ostringstream d;
    d << rows << " rows, header " << (header ? "ok" : "wrong") << ", box lambda=1 rows " << box1
      << ", repeat " << (same ? "identical" : "differs");
    return {header && rows == 120 && box1 == 20 && same, d.str()};
}

Verdict golden() {
    auto cfg = load_config((kSource / "tests/golden/config.json").string());
    const auto dir = scratch("golden");
    cfg.output_dir = dir.string();
    const int code = cmd_run(cfg);
    const auto got = slurp(dir / "trace.csv");
    const auto want = slurp(kSource / "tests/golden/1d-linear_trace.csv");
    std::ostringstream d;
    d << got.size() << " bytes vs " << want.size() << " committed, exit " << code;
    return {!want.empty() && got == want, d.str()};
}

}  // namespace

int main() {
    int failures = 0;
    failures += report(1, "safety", safety);
    failures += report(2, "optimality", optimality);
    failures += report(3, "termination", termination);
    failures += report(4, "coverage", coverage);
    failures += report(5, "sample budget", sample_budget);
    failures += report(6, "set oracles", set_oracles);
    failures += report(7, "monotonicity", monotonicity);
    failures += report(8, "scaling", scaling);
    failures += report(9, "sweep", sweep);
    failures += report(10, "golden trace", golden);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
