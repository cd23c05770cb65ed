// Command-line front end: solve, generate, analyze, bench.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ssg/analysis.hpp"
#include "ssg/bench.hpp"
#include "ssg/generation.hpp"
#include "ssg/io.hpp"
#include "ssg/solvers.hpp"

namespace fs = std::filesystem;
using namespace ssg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SolverFlags {
    std::string algorithm = "bvi";
    std::string inner;
    double epsilon = 1e-6;
    double naive_epsilon = 0.0;
    std::string mode = "absolute";
    std::uint64_t deflate_every = 100;
    bool no_deflate = false;
    bool gauss_seidel = false;
    double timeout_s = 0.0;
    std::uint64_t max_iter = 100'000'000;
    bool no_lower_check = false;
    bool crossing_check = false;

    void add_to(CLI::App* app) {
        app->add_option("--epsilon", epsilon, "Target precision")->capture_default_str();
        app->add_option("--naive-epsilon", naive_epsilon, "Naive precision (default: epsilon)");
        app->add_option("--mode", mode, "Difference: absolute or relative")
            ->check(CLI::IsMember({"absolute", "relative"}))
            ->capture_default_str();
        app->add_option("--deflate-every", deflate_every, "BVI deflation period")->capture_default_str();
        app->add_flag("--no-deflate", no_deflate, "Disable deflating");
        app->add_flag("--gauss-seidel", gauss_seidel, "Gauss-Seidel sweeps");
        app->add_option("--timeout-s", timeout_s, "Solver time limit in seconds (0: none)");
        app->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
        app->add_flag("--no-ovi-lower-check", no_lower_check, "OVI: never end a verification phase early");
        app->add_flag("--ovi-crossing-check", crossing_check,
                       "OVI: also iterate the lower bound during verification");
        app->add_option("--inner", inner, "tvi: vi|bvi|ovi, ptvi: naive|bounded");
    }

    SolverConfig config() const {
        SolverConfig c;
        c.epsilon = epsilon;
        c.naive_epsilon = naive_epsilon;
        c.mode = parse_diff_mode(mode);
        c.deflate_every = deflate_every;
        c.deflate = !no_deflate;
        c.gauss_seidel = gauss_seidel;
        c.timeout_s = timeout_s;
        c.max_iterations = max_iter;
        c.ovi_lower_check = !no_lower_check;
        c.ovi_crossing_check = crossing_check;
        return c;
    }

    SolveOptions options(Algorithm a) const {
        SolveOptions o;
        o.algorithm = a;
        if (!inner.empty()) {
            if (a == Algorithm::PTVI) {
                if (inner == "naive" || inner == "vi")
                    o.ptvi_inner = InnerSolver::Naive;
                else if (inner == "bounded" || inner == "bvi")
                    o.ptvi_inner = InnerSolver::Bounded;
                else
                    throw UsageError("ptvi inner solver must be naive or bounded");
            } else if (a == Algorithm::TVI) {
                o.topological_inner = parse_algorithm(inner);
                if (o.topological_inner != Algorithm::VI && o.topological_inner != Algorithm::BVI &&
                    o.topological_inner != Algorithm::OVI)
                    throw UsageError("tvi inner solver must be vi, bvi or ovi");
            }
        }
        return o;
    }
};

std::vector<std::string> expand_models(const std::vector<std::string>& inputs) {
    std::vector<std::string> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(in))
                if (e.is_regular_file() && e.path().extension() == ".ssg") found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(in);
        }
    }
    return out;
}

int run_solve(const std::string& model_spec, const SolverFlags& flags, bool print_all, bool csv) {
    const Algorithm algorithm = parse_algorithm(flags.algorithm);
    const SolverConfig cfg = flags.config();
    const SolveOptions options = flags.options(algorithm);
    cfg.validate();
    const SsgModel model = load_model(model_spec);

    if (algorithm == Algorithm::VI ||
        (algorithm == Algorithm::TVI && options.topological_inner == Algorithm::VI))
        std::cerr << "warning: plain value iteration gives no guarantee on the result's precision\n";

    const auto result = solve(model, cfg, options);
    const StateId s0 = model.initial();
    if (csv) {
        BenchRecord r;
        r.model_name = model_display_name(model_spec);
        r.algorithm = to_string(algorithm);
        r.epsilon = cfg.epsilon;
        r.mode = to_string(cfg.mode);
        r.iterations = result.iterations;
        r.verification_phases = result.verification_phases;
        r.wall_time_ms = result.wall_time.count() * 1000.0;
        r.status = to_string(result.status);
        r.value_at_initial_lower = result.lower[s0];
        r.value_at_initial_upper = result.upper[s0];
        std::cout << bench_csv_header() << "\n" << to_csv(r) << "\n";
        return result.ok() ? kExitOk : kExitSolver;
    }
    std::cout << "model: " << model_display_name(model_spec) << " (" << model.num_states() << " states)\n"
              << "algorithm: " << to_string(algorithm) << "\n"
              << "status: " << to_string(result.status) << "\n";
    if (result.lower[s0] == result.upper[s0])
        std::cout << "value: " << num(result.lower[s0]) << "\n";
    else
        std::cout << "bounds: [" << num(result.lower[s0]) << ", " << num(result.upper[s0]) << "]\n";
    std::cout << "iterations: " << result.iterations << "\n";
    if (algorithm == Algorithm::OVI) std::cout << "verification phases: " << result.verification_phases << "\n";
    if (algorithm == Algorithm::PTVI)
        std::cout << "local checks: " << result.local_checks_passed << " passed, " << result.local_checks_failed
                  << " failed\n";
    std::cout << "time ms: " << num(result.wall_time.count() * 1000.0) << "\n";
    if (!result.diagnostics.empty()) std::cout << "diagnostics: " << result.diagnostics << "\n";
    if (print_all)
        for (StateId s = 0; s < model.num_states(); ++s)
            std::cout << s << " " << num(result.lower[s]) << " " << num(result.upper[s]) << "\n";
    return result.ok() ? kExitOk : kExitSolver;
}

struct GenerateFlags {
    std::string kind = "random";
    std::size_t n = 10;
    std::size_t m = 1;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string out = ".";
    std::size_t k = 2;
    std::size_t scc_min = 5;
    std::size_t scc_max = 10;
    double minimizer_prob = 0.5;
    double geom = 0.85;
    double min_prob = 1e-4;
    std::size_t max_trans = 0;
    bool strict = false;
};

int run_generate(const GenerateFlags& g) {
    fs::create_directories(g.out);
    for (std::size_t i = 0; i < g.count; ++i) {
        const std::uint64_t seed = g.seed + i;
        SsgModel model;
        if (g.kind == "random") {
            GenParams p;
            p.n = g.n;
            p.minimizer_prob = g.minimizer_prob;
            p.extra_action_geom = g.geom;
            p.min_prob = g.min_prob;
            p.max_transitions_per_action = g.max_trans;
            p.strict = g.strict;
            p.seed = seed;
            model = generate_random(p);
        } else if (g.kind == "tree") {
            TreeParams p;
            p.n = g.n;
            p.k = g.k;
            p.minimizer_prob = g.minimizer_prob;
            p.extra_action_geom = g.geom;
            p.min_prob = g.min_prob;
            p.seed = seed;
            model = generate_tree(p);
        } else if (g.kind == "scc") {
            SccChainParams p;
            p.n = g.n;
            p.scc_size_min = g.scc_min;
            p.scc_size_max = g.scc_max;
            p.minimizer_prob = g.minimizer_prob;
            p.extra_action_geom = g.geom;
            p.min_prob = g.min_prob;
            p.seed = seed;
            model = generate_scc_chain(p);
        } else {
            model = handcrafted(parse_handcrafted_kind(g.kind), g.n, g.m);
        }
        const auto report = validate_model(model);
        if (!report.ok()) throw std::runtime_error("generator produced an invalid model:\n" + report.to_string());
        std::ostringstream name;
        name << g.kind << "_" << g.n << "_" << seed << ".ssg";
        const auto path = (fs::path(g.out) / name.str()).string();
        write_model_file(path, model);
        std::cout << path << "\n";
    }
    return kExitOk;
}

int run_analyze(const std::vector<std::string>& inputs, const std::string& out_path, const std::string& stats_path) {
    const auto models = expand_models(inputs);
    if (models.empty()) throw UsageError("no models to analyze");
    std::vector<FeatureReport> reports;
    std::ostringstream csv;
    csv << feature_csv_header() << "\n";
    for (const auto& m : models) {
        reports.push_back(compute_features(load_model(m)));
        csv << feature_csv_row(model_display_name(m), reports.back()) << "\n";
    }
    const auto stats = aggregate_features(reports);
    std::array<double, FeatureReport::kCount> means{};
    for (std::size_t f = 0; f < FeatureReport::kCount; ++f) means[f] = stats.features[f].mean;
    // Aggregate row: per-feature means, in column order.
    csv << "mean";
    for (double v : means) csv << "," << num(v);
    csv << "\n";

    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << csv.str();
    }
    if (!stats_path.empty()) {
        std::ofstream out(stats_path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + stats_path + "'");
        out << stats_csv(stats);
    }
    return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver workbench for simple stochastic games"};
    app.require_subcommand(1);

    SolverFlags solve_flags;
    std::string solve_model;
    bool print_all = false;
    bool solve_csv = false;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one model");
    solve_cmd->add_option("model", solve_model, "Model file, example, or kind:n[:m]")->required();
    solve_cmd->add_option("--alg", solve_flags.algorithm, "vi|bvi|ovi|tvi|ptvi|si")
        ->check(CLI::IsMember({"vi", "bvi", "ovi", "tvi", "ptvi", "si"}))
        ->capture_default_str();
    solve_cmd->add_flag("--all", print_all, "Print bounds of every state");
    solve_cmd->add_flag("--csv", solve_csv, "Print one bench-format CSV record instead");
    solve_flags.add_to(solve_cmd);

    GenerateFlags gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write generated models");
    gen_cmd->add_option("--kind", gen.kind, "random|tree|scc|tvi-chain|ovi-easy|ovi-hard|simple-scc")
        ->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Number of states")->capture_default_str();
    gen_cmd->add_option("--m", gen.m, "simple-scc: number of trees");
    gen_cmd->add_option("--count", gen.count, "Number of models")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Seed of the first model")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();
    gen_cmd->add_option("--k", gen.k, "tree: actions per node");
    gen_cmd->add_option("--scc-min", gen.scc_min, "scc: smallest block");
    gen_cmd->add_option("--scc-max", gen.scc_max, "scc: largest block");
    gen_cmd->add_option("--minimizer-prob", gen.minimizer_prob, "Chance of a Minimizer state");
    gen_cmd->add_option("--extra-action-geom", gen.geom, "Continuation chance for extra actions");
    gen_cmd->add_option("--min-prob", gen.min_prob, "Smallest increment");
    gen_cmd->add_option("--max-transitions", gen.max_trans, "Entries per action (0: unlimited)");
    gen_cmd->add_flag("--strict", gen.strict, "Redraw closing entries below --min-prob");

    std::vector<std::string> analyze_inputs;
    std::string analyze_out, analyze_stats;
    auto* analyze_cmd = app.add_subcommand("analyze", "Feature CSV for models");
    analyze_cmd->add_option("models", analyze_inputs, "Model files or directories")->required();
    analyze_cmd->add_option("--out", analyze_out, "CSV path (default stdout)");
    analyze_cmd->add_option("--stats", analyze_stats, "Write corpus statistics here");

    SolverFlags bench_flags;
    std::vector<std::string> bench_inputs;
    std::string bench_algs = "bvi,ovi,ptvi", bench_out;
    double bench_timeout = 60.0;
    std::size_t bench_workers = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Run algorithms over models");
    bench_cmd->add_option("models", bench_inputs, "Model files, directories or kind:n specs")->required();
    bench_cmd->add_option("--algs", bench_algs, "Comma-separated algorithms")->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "CSV to append to")->required();
    bench_cmd->add_option("--run-timeout-s", bench_timeout, "Wall-clock limit per run")->capture_default_str();
    bench_cmd->add_option("--workers", bench_workers, "Parallel workers")->capture_default_str();
    bench_flags.add_to(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_cmd) return run_solve(solve_model, solve_flags, print_all, solve_csv);
        if (*gen_cmd) return run_generate(gen);
        if (*analyze_cmd) return run_analyze(analyze_inputs, analyze_out, analyze_stats);
        if (*bench_cmd) {
            BenchOptions o;
            o.models = expand_models(bench_inputs);
            for (const auto& a : split_list(bench_algs)) o.algorithms.push_back(parse_algorithm(a));
            o.config = bench_flags.config();
            o.solve = bench_flags.options(Algorithm::TVI);
            if (!bench_flags.inner.empty()) o.solve.ptvi_inner = bench_flags.options(Algorithm::PTVI).ptvi_inner;
            o.run_timeout_s = bench_timeout;
            o.workers = bench_workers;
            o.csv_path = bench_out;
            const auto records = run_bench(o);
            std::cout << records.size() << " runs appended to " << bench_out << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
