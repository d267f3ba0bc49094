// Command-line front end: single simulations, Monte-Carlo experiments,
// blow-up ODE solves with constants emission, partition verification, and
// burn-time heatmap rendering.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 resource guard, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusburn/blasius.hpp"
#include "torusburn/burn.hpp"
#include "torusburn/constants.hpp"
#include "torusburn/errors.hpp"
#include "torusburn/experiments.hpp"
#include "torusburn/partitions.hpp"
#include "torusburn/processes.hpp"
#include "torusburn/render.hpp"
#include "torusburn/torus.hpp"
#include "torusburn/trace_io.hpp"

namespace fs = std::filesystem;
using namespace torusburn;

namespace {

struct CommonArgs {
    int d = 1;
    std::vector<std::int64_t> sides;
    std::uint64_t seed = 1;
    std::string process = "rs";
    int trials = 100;
    int p_max = 4;
    double epsilon = 0.5;
    std::string out_dir = ".";
    int jobs = 0;
    double tolerance = 1e-10;
    double blowup_threshold = 1e10;
    bool keep_burn_time = false;
    bool all_dims = false;
    std::string kind = "tau";
    std::string trace_path;
};

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void check_simulation_guard(const TorusSpec& spec) {
    if (spec.side() < 3)
        throw std::invalid_argument("Monte-Carlo simulation needs n >= 3");
    if (spec.vertex_count() > kMaxSimulationVertices)
        throw ResourceLimitError("n^d = " + std::to_string(spec.vertex_count()) +
                                 " exceeds the simulation guard of " +
                                 std::to_string(kMaxSimulationVertices) + " vertices");
}

void cmd_simulate(const CommonArgs& args) {
    const TorusSpec spec(args.d, args.sides.at(0));
    check_simulation_guard(spec);
    ensure_out_dir(args.out_dir);
    const std::string stem = "_d" + std::to_string(args.d) + "_n" + std::to_string(spec.side()) +
                             "_" + args.process + "_seed" + std::to_string(args.seed);

    if (args.process == "coupled") {
        const CoupledRun run = run_coupled_hierarchy(spec, args.seed, args.p_max);
        nlohmann::json levels = nlohmann::json::array();
        for (int p = 1; p <= args.p_max; ++p) {
            const auto& lvl = run.levels[static_cast<std::size_t>(p - 1)];
            nlohmann::json jl{{"p", p}, {"unburned_per_step", lvl.unburned_per_step}};
            if (lvl.tau) jl["tau"] = *lvl.tau;
            levels.push_back(jl);
        }
        nlohmann::json j{{"d", args.d},
                         {"n", spec.side()},
                         {"seed", args.seed},
                         {"p_max", args.p_max},
                         {"steps", run.steps},
                         {"levels", levels},
                         {"star", {{"tau", run.star.tau ? nlohmann::json(*run.star.tau) : nlohmann::json()},
                                   {"unburned_per_step", run.star.unburned_per_step}}}};
        const std::string path = args.out_dir + "/coupled" + stem + ".json";
        write_text(path, j.dump() + "\n");
        std::cout << "steps=" << run.steps << " star_tau="
                  << (run.star.tau ? std::to_string(*run.star.tau) : std::string("not-reached"))
                  << " -> " << path << "\n";
        return;
    }

    const auto kind = process_from_name(args.process);
    if (!kind || *kind == ProcessKind::Coupled)
        throw std::invalid_argument("unknown process: " + args.process);
    RunOptions opt;
    opt.keep_burn_time = args.keep_burn_time;
    TraceFile tf;
    tf.process = args.process;
    tf.seed = args.seed;
    switch (*kind) {
        case ProcessKind::CouponCollector: tf.trace = run_coupon_collector(spec, args.seed, opt); break;
        case ProcessKind::RejectionSampling: tf.trace = run_rejection_sampling(spec, args.seed, opt); break;
        default: tf.trace = run_rejection_sampling_literal(spec, args.seed, opt); break;
    }
    const std::string path = args.out_dir + "/trace" + stem + ".json";
    write_trace(tf, path);
    const double norm = tau_normalizer(*kind, args.d, spec.side());
    std::cout << "tau=" << tf.trace.tau << " normalized_tau=" << tf.trace.tau / norm << " -> "
              << path << "\n";
}

void cmd_render(const CommonArgs& args) {
    const TraceFile tf = read_trace(args.trace_path);
    const std::vector<std::uint8_t> ppm = render_burn_heatmap(tf.trace);
    ensure_out_dir(fs::path(args.out_dir).string());
    const std::string path =
        (fs::path(args.out_dir) / (fs::path(args.trace_path).stem().string() + ".ppm")).string();
    write_ppm(ppm, path);
    std::cout << "wrote " << path << " (" << tf.trace.side << "x" << tf.trace.side << ")\n";
}

std::string constants_line(int d, const BlasiusOptions& opt) {
    const auto sol = solve_blasius(d, opt);
    char buf[160];
    std::snprintf(buf, sizeof buf, "d=%d T=%.16g err=%.3g tolerance=%g threshold=%g\n", d,
                  sol.explosion_time, sol.explosion_error, opt.tolerance, opt.blowup_threshold);
    return buf;
}

void cmd_blasius(const CommonArgs& args) {
    BlasiusOptions opt;
    opt.tolerance = args.tolerance;
    opt.blowup_threshold = args.blowup_threshold;
    ensure_out_dir(args.out_dir);

    if (args.all_dims) {
        std::string text =
            "# explosion times T(d) of y^(d+1) = 2^d y y^(d), flat start, y^(d)(0) = 1\n"
            "# generated-by: torusburn blasius --all-d\n";
        for (int d = 1; d <= 6; ++d) text += constants_line(d, opt);
        const std::string path = args.out_dir + "/explosion_times.txt";
        write_text(path, text);
        std::cout << text << "-> " << path << "\n";
        return;
    }

    const int d = args.d;
    const BlasiusSolution sol = solve_blasius(d, opt);
    std::string text = "# explosion time of y^(d+1) = 2^d y y^(d), flat start, y^(d)(0) = 1\n";
    text += constants_line(d, opt);
    write_text(args.out_dir + "/explosion_d" + std::to_string(d) + ".txt", text);

    // trajectory on the binary-exact grid k/256, all derivative columns
    std::string csv = "t";
    for (int j = 0; j <= d; ++j) csv += ",y" + std::to_string(j);
    csv += "\n";
    const double t_max = 0.98 * sol.explosion_time;
    for (std::int64_t k = 0;; ++k) {
        const double t = static_cast<double>(k) / 256.0;
        if (t > t_max || t > sol.last_time()) break;
        char num[64];
        std::snprintf(num, sizeof num, "%.10f", t);
        csv += num;
        for (int j = 0; j <= d; ++j) {
            std::snprintf(num, sizeof num, ",%.12g", sol.value(j, t));
            csv += num;
        }
        csv += "\n";
    }
    const std::string csv_path = args.out_dir + "/trajectory_d" + std::to_string(d) + ".csv";
    write_text(csv_path, csv);
    std::cout << "T(" << d << ") = " << sol.explosion_time << " +- " << sol.explosion_error
              << " -> " << csv_path << "\n";
}

void cmd_partition(const CommonArgs& args) {
    const TorusSpec spec(args.d, args.sides.at(0));
    const NestedPartition part = build_nested_partition(spec, args.epsilon);
    const PartitionReport report = verify_partition(part);
    std::cout << "levels=" << part.ell << " h=" << part.h << " m=" << part.m
              << " max_diameter_ratio=" << report.max_diameter_ratio
              << " cardinality_ratio=[" << report.min_cardinality_ratio << ", "
              << report.max_cardinality_ratio << "]"
              << " C=" << std::pow(8.0, args.d) << "\n";
    for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
    if (!args.out_dir.empty() && args.out_dir != ".") {
        ensure_out_dir(args.out_dir);
        nlohmann::json j{{"d", args.d},
                         {"n", spec.side()},
                         {"epsilon", args.epsilon},
                         {"h", part.h},
                         {"ell", part.ell},
                         {"max_diameter_ratio", report.max_diameter_ratio},
                         {"min_cardinality_ratio", report.min_cardinality_ratio},
                         {"max_cardinality_ratio", report.max_cardinality_ratio},
                         {"violations", report.violations}};
        write_text(args.out_dir + "/partition_d" + std::to_string(args.d) + "_n" +
                       std::to_string(spec.side()) + ".json",
                   j.dump() + "\n");
    }
    if (!report.violations.empty()) throw std::runtime_error("partition invariants violated");
}

void cmd_experiment(const CommonArgs& args) {
    ExperimentPlan plan;
    plan.dim = args.d;
    plan.sides = args.sides;
    plan.trials = args.trials;
    plan.seed_base = args.seed;
    plan.p_max = args.p_max;
    plan.jobs = effective_jobs(args.jobs);
    const auto kind = process_from_name(args.process);
    if (!kind) throw std::invalid_argument("unknown process: " + args.process);
    plan.process = *kind;
    ensure_out_dir(args.out_dir);
    const std::string stem = args.out_dir + "/" + args.kind + "_d" + std::to_string(args.d);

    nlohmann::json j;
    std::string csv;
    if (args.kind == "tau") {
        const ScalingReport r = tau_scaling_experiment(plan);
        j = report_to_json(r);
        csv = report_to_csv(r);
        for (const auto& row : r.rows)
            std::cout << "n=" << row.side << " normalized_tau mean=" << row.normalized.mean
                      << " sd=" << row.normalized.stddev << " q05=" << row.normalized.q05
                      << " q95=" << row.normalized.q95 << "\n";
    } else if (args.kind == "profile") {
        const ProfileReport r = functional_profile_experiment(plan);
        j = report_to_json(r);
        csv = report_to_csv(r);
        for (const auto& row : r.rows)
            std::cout << "n=" << row.side << " sup_deviation mean=" << row.sup_deviation.mean
                      << " q95=" << row.sup_deviation.q95 << "\n";
    } else if (args.kind == "picard") {
        plan.process = ProcessKind::Coupled;
        const PicardProfileReport r = picard_profile_experiment(plan);
        j = report_to_json(r);
        csv = report_to_csv(r);
        for (const auto& row : r.rows)
            std::cout << "n=" << row.side << " p=" << row.level
                      << " sup_deviation mean=" << row.sup_deviation.mean << "\n";
    } else if (args.kind == "bounds") {
        const BoundsReport r = bounds_scaling_experiment(args.d, args.sides);
        j = report_to_json(r);
        csv = report_to_csv(r);
        std::cout << "alpha=" << r.alpha << " gamma=" << r.gamma << "\n";
        for (const auto& row : r.rows)
            std::cout << "n=" << row.side << " kappa_ratio=" << row.kappa_ratio
                      << " greedy_ratio=" << row.greedy_ratio << "\n";
    } else {
        throw std::invalid_argument("unknown experiment kind: " + args.kind);
    }
    write_text(stem + ".json", j.dump(2) + "\n");
    write_text(stem + ".csv", csv);
    std::cout << "-> " << stem << ".json, " << stem << ".csv\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random graph-burning processes on the discrete torus"};
    app.require_subcommand(1);
    CommonArgs args;

    auto* sim = app.add_subcommand("simulate", "run one burning process and write its trace");
    sim->add_option("--d", args.d, "dimension")->required();
    sim->add_option("--n", args.sides, "side length")->required()->expected(1);
    sim->add_option("--seed", args.seed, "PRNG seed");
    sim->add_option("--process", args.process, "cc | rs | literal-rs | coupled");
    sim->add_option("--p-max", args.p_max, "levels of the coupled hierarchy");
    sim->add_option("--out", args.out_dir, "output directory");
    sim->add_flag("--keep-burn-time", args.keep_burn_time, "store per-vertex burn times");
    sim->callback([&] { cmd_simulate(args); });

    auto* ren = app.add_subcommand("render", "render a d=2 trace to a PPM heatmap");
    ren->add_option("--trace", args.trace_path, "trace JSON file")->required();
    ren->add_option("--out", args.out_dir, "output directory");
    ren->callback([&] { cmd_render(args); });

    auto* bla = app.add_subcommand("blasius", "solve the blow-up ODE and write T(d)");
    bla->add_option("--d", args.d, "dimension");
    bla->add_flag("--all-d", args.all_dims, "emit the constants file for d = 1..6");
    bla->add_option("--tolerance", args.tolerance, "local error tolerance");
    bla->add_option("--blowup-threshold", args.blowup_threshold, "stop once y^(d) reaches this");
    bla->add_option("--out", args.out_dir, "output directory");
    bla->callback([&] { cmd_blasius(args); });

    auto* par = app.add_subcommand("partition", "build and verify a nested dyadic partition");
    par->add_option("--d", args.d, "dimension")->required();
    par->add_option("--n", args.sides, "side length")->required()->expected(1);
    par->add_option("--epsilon", args.epsilon, "scale parameter");
    par->add_option("--out", args.out_dir, "output directory for the JSON report");
    par->callback([&] { cmd_partition(args); });

    auto* exp = app.add_subcommand("experiment", "Monte-Carlo scaling experiments");
    exp->add_option("--kind", args.kind, "tau | profile | picard | bounds")->required();
    exp->add_option("--d", args.d, "dimension")->required();
    exp->add_option("--n", args.sides, "side lengths (repeatable, increasing)")->required();
    exp->add_option("--process", args.process, "cc | rs | literal-rs | coupled");
    exp->add_option("--trials", args.trials, "trials per side length");
    exp->add_option("--seed", args.seed, "seed base; trial i uses seed+i");
    exp->add_option("--p-max", args.p_max, "levels of the coupled hierarchy");
    exp->add_option("--jobs", args.jobs, "worker threads (0 = hardware)");
    exp->add_option("--out", args.out_dir, "output directory");
    exp->callback([&] { cmd_experiment(args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "usage error: bad input file: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
