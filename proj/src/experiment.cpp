#include "colsafe/experiment.hpp"

#include "colsafe/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace colsafe {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// Runs fn(0..count-1) on a small pool; results go to caller-owned slots, so
// completion order does not matter.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) s += ';';
        s += format_double(values[k]);
    }
    return s;
}

ojson finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two or more paired values");
    }
    double mx = 0.0;
    double my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += std::log(x[k]) / n;
        my += std::log(y[k]) / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = std::log(x[k]) - mx;
        sxy += dx * (std::log(y[k]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::unique_ptr<ConfidenceModel> make_model(const ExperimentConfig& cfg, const Benchmark& bench) {
    if (cfg.algorithm == Algorithm::GpSafeOpt) {
        return std::make_unique<GpConfidenceModel>(bench.env.grid(), bench.env.output_dims(),
                                                   cfg.gp);
    }
    return std::make_unique<NadarayaWatsonModel>(bench.env.grid(), cfg.kernel,
                                                 bound_config(cfg, bench.env));
}

OracleInfo compute_oracle(const ExperimentConfig& cfg, const Benchmark& bench) {
    const auto params = reachability_params(bench.env, cfg.beta_bar, cfg.lipschitz);
    OracleInfo info;
    info.closure_size = reachability_closure(bench.env, params, bench.seed_set).count();
    info.optimum = true_safe_optimum(bench.env, params, bench.seed_set);
    return info;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const Benchmark& bench,
                          const OracleInfo& oracle, std::uint64_t stream) {
    EnvSource source(bench.env, cfg.seed, stream);
    ExplorerOptions options;
    options.time_updates = cfg.trace_timing;
    options.check_invariants = cfg.check_invariants;
    options.record_sets = cfg.export_sets;
    SafeExplorer explorer(bench.env.grid(), cfg.lipschitz, bench.env.thresholds(), bench.seed_set,
                          make_model(cfg, bench), source, options);

    RunOutcome out;
    out.result = explorer.run(StoppingConfig{cfg.beta_bar, cfg.max_iterations, cfg.run_to_cap});
    for (const auto& rec : out.result.trace) {
        if (!bench.env.is_safe(rec.a_index)) ++out.true_violations;
    }
    out.best_true_reward = bench.env.reward(out.result.best_index);
    out.oracle = oracle.optimum;
    out.closure_size = oracle.closure_size;
    out.optimal = out.best_true_reward - (oracle.optimum.value - 2.0 * cfg.beta_bar) >= -1e-9;
    return out;
}

void write_trace_csv(std::ostream& out, const SyntheticEnv& env, const RunResult& result) {
    out << "n,a_index,a_coords";
    for (std::size_t i = 0; i < env.output_dims().size(); ++i) out << ",i" << i << "_meas";
    out << ",kappa,max_width,S_size,M_size,G_size,best_index,best_l,update_ms,violations\n";
    for (const auto& r : result.trace) {
        out << r.n << ',' << r.a_index << ',' << join(r.a_coords);
        for (const auto& v : r.measurement.values) out << ',' << join(v);
        out << ',' << format_double(r.kappa) << ',' << format_double(r.max_width) << ','
            << r.s_size << ',' << r.m_size << ',' << r.g_size << ',' << r.best_index << ','
            << format_double(r.best_l) << ',' << format_double(r.update_ms) << ','
            << r.violations << '\n';
    }
}

void write_sets_csv(std::ostream& out, const RunResult& result) {
    out << "n,S_hex,M_hex,G_hex\n";
    for (const auto& r : result.trace) {
        out << r.n << ',' << r.safe_hex << ',' << r.maximizers_hex << ',' << r.expanders_hex
            << '\n';
    }
}

std::string summary_json(const ExperimentConfig& cfg, const Benchmark& bench,
                         const RunOutcome& outcome) {
    const auto& r = outcome.result;
    const auto coords = bench.env.grid().point(r.best_index);
    ojson j;
    j["algorithm"] = to_string(cfg.algorithm);
    j["benchmark"] = bench.env.name();
    j["seed"] = cfg.seed;
    j["stop_reason"] = to_string(r.reason);
    j["iterations"] = r.iterations;
    j["converged_at"] = r.converged_at;
    j["best_index"] = r.best_index;
    j["best_coords"] = std::vector<double>(coords.begin(), coords.end());
    j["best_lower"] = finite_or_null(r.best_lower);
    j["best_true_reward"] = outcome.best_true_reward;
    if (!r.trace.empty()) {
        const auto& last = r.trace.back();
        j["final_sizes"] = {{"S", last.s_size}, {"M", last.m_size}, {"G", last.g_size}};
    }
    j["confidence_violation_events"] = r.violations;
    j["true_constraint_violations"] = outcome.true_violations;
    j["beta_bar"] = cfg.beta_bar;
    if (cfg.algorithm == Algorithm::CoLSafe) {
        try {
            j["n_beta_bar"] = n_beta_bar(bound_config(cfg, bench.env), cfg.beta_bar);
        } catch (const ConfigError&) {
            j["n_beta_bar"] = nullptr;
        }
    }
    j["oracle"] = {{"closure_size", outcome.closure_size},
                   {"safe_optimum_index", outcome.oracle.index},
                   {"safe_optimum_value", outcome.oracle.value},
                   {"optimality_holds", outcome.optimal}};
    const auto& inv = r.invariants;
    j["invariants"] = {{"checks", inv.checks},
                       {"upper_increased", inv.upper_increased},
                       {"lower_decreased", inv.lower_decreased},
                       {"width_increased", inv.width_increased},
                       {"safe_shrunk", inv.safe_shrunk},
                       {"candidates_grew", inv.candidates_grew},
                       {"sampled_outside_candidates", inv.sampled_outside_candidates}};
    return j.dump(2) + "\n";
}

std::string env_json(const Benchmark& bench) {
    const auto& env = bench.env;
    const auto& grid = env.grid();
    ojson axes = ojson::array();
    for (const auto& ax : grid.axes()) {
        axes.push_back({{"lower", ax.lower}, {"upper", ax.upper}, {"resolution", ax.resolution}});
    }
    ojson j;
    j["name"] = env.name();
    j["dim"] = grid.dim();
    j["size"] = grid.size();
    j["axes"] = axes;
    j["output_dims"] = env.output_dims();
    j["thresholds"] = env.thresholds();
    j["true_lipschitz"] = env.true_lipschitz();
    j["noise"] = {{"kind", to_string(env.noise().kind)}, {"sigma", env.noise().sigma}};
    j["seed"] = env.seed();
    j["seed_set"] = bench.seed_set.indices();
    j["suggested"] = {{"lipschitz", bench.suggested.lipschitz},
                      {"lambda", bench.suggested.lambda},
                      {"beta_bar", bench.suggested.beta_bar},
                      {"sigma", bench.suggested.sigma}};
    return j.dump(2) + "\n";
}

int cmd_run(const ExperimentConfig& cfg) {
    const Benchmark bench = prepare_benchmark(cfg);
    const OracleInfo oracle = compute_oracle(cfg, bench);
    const RunOutcome outcome = run_experiment(cfg, bench, oracle);
    const fs::path dir = ensure_dir(cfg.output_dir);
    write_file(dir / "trace.csv",
               [&](std::ostream& o) { write_trace_csv(o, bench.env, outcome.result); });
    write_file(dir / "summary.json", [&](std::ostream& o) { o << summary_json(cfg, bench, outcome); });
    write_file(dir / "env.json", [&](std::ostream& o) { o << env_json(bench); });
    if (cfg.export_sets) {
        write_file(dir / "sets.csv", [&](std::ostream& o) { write_sets_csv(o, outcome.result); });
    }
    return outcome.result.reason == StopReason::Converged ? kExitSuccess : kExitCapHit;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepCell> cells;
    for (auto kind : cfg.sweep.kernels) {
        for (double lambda : cfg.sweep.lambdas) {
            SweepCell cell;
            cell.kernel = to_string(kind);
            cell.lambda = lambda;
            cells.push_back(std::move(cell));
        }
    }
    if (cfg.sweep.iterations == 0) throw ConfigError("sweep: iterations must be positive");
    parallel_for(cells.size(), cfg.workers, [&](std::size_t k) {
        SweepCell& cell = cells[k];
        try {
            ExperimentConfig c = cfg;
            c.algorithm = Algorithm::CoLSafe;
            const auto kind = kernel_kind_from_string(cell.kernel);
            if (kind == KernelKind::Box) {
                c.kernel = KernelSpec::box(cell.lambda);
            } else if (kind == KernelKind::Cosine) {
                c.kernel = KernelSpec::cosine(cell.lambda);
            } else {
                c.kernel = KernelSpec::truncated_matern(cell.lambda, cfg.sweep.nu,
                                                        cfg.sweep.lengthscale);
            }
            c.run_to_cap = true;
            c.max_iterations = cfg.sweep.iterations;
            const Benchmark bench = prepare_benchmark(c);
            const RunOutcome out = run_experiment(c, bench, OracleInfo{});
            for (const auto& rec : out.result.trace) {
                cell.rows.push_back(
                    SweepRow{cell.kernel, cell.lambda, rec.n, bench.env.reward(rec.best_index)});
            }
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
            cell.rows.clear();
        }
    });
    return cells;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const auto cells = run_sweep(cfg);
    const fs::path dir = ensure_dir(cfg.output_dir);
    write_file(dir / "sweep.csv", [&](std::ostream& o) {
        o << "kernel,lambda,n,f_best\n";
        for (const auto& cell : cells) {
            for (const auto& r : cell.rows) {
                o << r.kernel << ',' << format_double(r.lambda) << ',' << r.n << ','
                  << format_double(r.f_best) << '\n';
            }
        }
    });
    ojson summary = ojson::array();
    for (const auto& cell : cells) {
        ojson c{{"kernel", cell.kernel},
                {"lambda", cell.lambda},
                {"ok", cell.ok},
                {"rows", cell.rows.size()}};
        if (!cell.ok) c["error"] = cell.error;
        summary.push_back(c);
    }
    write_file(dir / "sweep_summary.json",
               [&](std::ostream& o) { o << ojson{{"cells", summary}}.dump(2) << "\n"; });
    return kExitSuccess;
}

BenchResult run_bench(const ExperimentConfig& cfg) {
    if (cfg.bench.sizes.size() < 2) throw ConfigError("bench: need at least two sizes");
    const std::size_t top = *std::max_element(cfg.bench.sizes.begin(), cfg.bench.sizes.end());
    if (std::find(cfg.bench.sizes.begin(), cfg.bench.sizes.end(), 0) != cfg.bench.sizes.end()) {
        throw ConfigError("bench: sizes must be positive");
    }
    BenchResult out;
    out.sizes = cfg.bench.sizes;
    for (auto algorithm : {Algorithm::CoLSafe, Algorithm::GpSafeOpt}) {
        ExperimentConfig c = cfg;
        c.algorithm = algorithm;
        c.run_to_cap = true;
        c.max_iterations = top;
        c.trace_timing = true;
        c.check_invariants = false;
        const Benchmark bench = prepare_benchmark(c);
        const RunOutcome run = run_experiment(c, bench, OracleInfo{});
        auto& medians = algorithm == Algorithm::CoLSafe ? out.nw_median_ms : out.gp_median_ms;
        auto& per_step = algorithm == Algorithm::CoLSafe ? out.nw_ms : out.gp_ms;
        for (const auto& rec : run.result.trace) per_step.push_back(rec.update_ms);
        const std::size_t half = cfg.bench.window / 2;
        for (std::size_t s : cfg.bench.sizes) {
            std::vector<double> times;
            const std::size_t lo = s > half ? s - half : 1;
            const std::size_t hi = std::min(top, s + half);
            for (std::size_t n = lo; n <= hi; ++n) times.push_back(run.result.trace[n - 1].update_ms);
            medians.push_back(median(times));
        }
    }
    std::vector<double> xs(out.sizes.begin(), out.sizes.end());
    out.nw_slope = loglog_slope(xs, out.nw_median_ms);
    out.gp_slope = loglog_slope(xs, out.gp_median_ms);
    const auto at = std::max_element(out.sizes.begin(), out.sizes.end()) - out.sizes.begin();
    out.ratio_at_max = out.nw_median_ms[at] / out.gp_median_ms[at];
    return out;
}

int cmd_bench(const ExperimentConfig& cfg, BenchResult* result) {
    const BenchResult r = run_bench(cfg);
    const fs::path dir = ensure_dir(cfg.output_dir);
    write_file(dir / "bench.csv", [&](std::ostream& o) {
        o << "algorithm,n,update_ms\n";
        for (std::size_t k = 0; k < r.nw_ms.size(); ++k) {
            o << "colsafe," << k + 1 << ',' << format_double(r.nw_ms[k]) << '\n';
        }
        for (std::size_t k = 0; k < r.gp_ms.size(); ++k) {
            o << "gp-safeopt," << k + 1 << ',' << format_double(r.gp_ms[k]) << '\n';
        }
    });
    ojson j;
    j["sizes"] = r.sizes;
    j["slopes"] = {{"colsafe", r.nw_slope}, {"gp-safeopt", r.gp_slope}};
    j["median_update_ms"] = {{"colsafe", r.nw_median_ms}, {"gp-safeopt", r.gp_median_ms}};
    j["ratio_at_max"] = r.ratio_at_max;
    write_file(dir / "bench_summary.json", [&](std::ostream& o) { o << j.dump(2) << "\n"; });
    if (result) *result = r;
    return kExitSuccess;
}

VerifyReport run_verify(const ExperimentConfig& cfg) {
    const Benchmark bench = prepare_benchmark(cfg);
    const OracleInfo oracle = compute_oracle(cfg, bench);
    std::vector<RunOutcome> outcomes(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        outcomes[t] = run_experiment(cfg, bench, oracle, t);
        outcomes[t].result.trace.clear();
        outcomes[t].result.trace.shrink_to_fit();
    });
    VerifyReport rep;
    rep.trials = cfg.trials;
    for (const auto& o : outcomes) {
        if (o.true_violations > 0) ++rep.violation_runs;
        rep.confidence_violation_events += o.result.violations;
        if (o.result.reason == StopReason::Converged) {
            ++rep.converged_runs;
            if (o.result.violations == 0) {
                ++rep.optimality_checked;
                if (o.optimal) ++rep.optimality_passed;
            }
        }
        rep.invariant_checks += o.result.invariants.checks;
        rep.invariant_failures += o.result.invariants.failures();
        if (o.result.invariants.failures() > 0) ++rep.runs_with_invariant_failures;
    }
    const double n = static_cast<double>(rep.trials);
    rep.violation_fraction = static_cast<double>(rep.violation_runs) / n;
    rep.violation_bound = cfg.delta + 2.0 * std::sqrt(cfg.delta * (1.0 - cfg.delta) / n);
    return rep;
}

std::string verify_json(const VerifyReport& r) {
    ojson j;
    j["trials"] = r.trials;
    j["violation_runs"] = r.violation_runs;
    j["violation_fraction"] = r.violation_fraction;
    j["violation_bound"] = r.violation_bound;
    j["converged_runs"] = r.converged_runs;
    j["optimality_checked"] = r.optimality_checked;
    j["optimality_passed"] = r.optimality_passed;
    j["optimality_fraction"] =
        r.optimality_checked ? static_cast<double>(r.optimality_passed) / r.optimality_checked : 1.0;
    j["confidence_violation_events"] = r.confidence_violation_events;
    j["invariants"] = {{"checks", r.invariant_checks},
                       {"failures", r.invariant_failures},
                       {"runs_with_failures", r.runs_with_invariant_failures}};
    return j.dump(2) + "\n";
}

int cmd_verify(const ExperimentConfig& cfg, VerifyReport* report) {
    const VerifyReport r = run_verify(cfg);
    const fs::path dir = ensure_dir(cfg.output_dir);
    write_file(dir / "verify.json", [&](std::ostream& o) { o << verify_json(r); });
    if (report) *report = r;
    return kExitSuccess;
}

}  // namespace colsafe
