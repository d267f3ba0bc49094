#pragma once

// Monte-Carlo drivers connecting the simulated processes to the limit
// theory: tau scaling under both ignition laws, the functional limit of the
// unburned fraction against 1/y^(d), the per-level profiles of the coupled
// hierarchy against the monotone iterates 1/f_p, and the deterministic
// bound scaling. Trials are embarrassingly parallel; trial i always uses
// seed_base + i and aggregation reduces over results in trial order, so
// reports are reproducible regardless of scheduling.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "torusburn/blasius.hpp"
#include "torusburn/burn.hpp"
#include "torusburn/constants.hpp"
#include "torusburn/errors.hpp"
#include "torusburn/processes.hpp"
#include "torusburn/stats.hpp"
#include "torusburn/torus.hpp"

namespace torusburn {

enum class ProcessKind { CouponCollector, RejectionSampling, LiteralRejectionSampling, Coupled };

inline std::string process_name(ProcessKind k) {
    switch (k) {
        case ProcessKind::CouponCollector: return "cc";
        case ProcessKind::RejectionSampling: return "rs";
        case ProcessKind::LiteralRejectionSampling: return "literal-rs";
        case ProcessKind::Coupled: return "coupled";
    }
    return "?";
}

inline std::optional<ProcessKind> process_from_name(const std::string& s) {
    if (s == "cc") return ProcessKind::CouponCollector;
    if (s == "rs") return ProcessKind::RejectionSampling;
    if (s == "literal-rs") return ProcessKind::LiteralRejectionSampling;
    if (s == "coupled") return ProcessKind::Coupled;
    return std::nullopt;
}

/// Memory guard for Monte-Carlo instances (per-vertex engine state).
inline constexpr std::uint64_t kMaxSimulationVertices = 1ull << 26;

struct ExperimentPlan {
    int dim = 1;
    std::vector<std::int64_t> sides;
    int trials = 1;
    std::uint64_t seed_base = 1;
    ProcessKind process = ProcessKind::RejectionSampling;
    int p_max = 4;            ///< coupled hierarchy depth
    int profile_points = 256; ///< time grid size for profile comparisons
    double t_fraction = 0.95; ///< profile horizon as a fraction of T
    int jobs = 1;

    void validate() const {
        if (dim < 1) throw std::invalid_argument("plan: dimension must be >= 1");
        if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
        if (sides.empty()) throw std::invalid_argument("plan: no side lengths given");
        for (std::size_t i = 0; i + 1 < sides.size(); ++i)
            if (sides[i] >= sides[i + 1])
                throw std::invalid_argument("plan: side lengths must be strictly increasing");
        for (std::int64_t n : sides) {
            if (n < 3) throw std::invalid_argument("plan: Monte-Carlo drivers need n >= 3");
            const TorusSpec spec(dim, n);
            if (spec.vertex_count() > kMaxSimulationVertices)
                throw ResourceLimitError("plan: n^d = " + std::to_string(spec.vertex_count()) +
                                         " exceeds the simulation guard of " +
                                         std::to_string(kMaxSimulationVertices) + " vertices");
        }
        if (profile_points < 2) throw std::invalid_argument("plan: profile grid too small");
        if (!(t_fraction > 0.0 && t_fraction < 1.0))
            throw std::invalid_argument("plan: t_fraction must lie in (0, 1)");
    }
};

namespace detail {

template <typename Fn>
inline void parallel_for(int jobs, int count, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    const int workers = std::min(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace detail

/// Normalizer making tau converge to 1: (d!/2^d n^d ln(n^d))^(1/(d+1)) for
/// the coupon-collector law, T(d) * n^(d/(d+1)) for rejection sampling.
inline double tau_normalizer(ProcessKind process, int d, std::int64_t n) {
    const double nd = std::pow(static_cast<double>(n), d);
    if (process == ProcessKind::CouponCollector) {
        double dfact = 1.0;
        for (int i = 2; i <= d; ++i) dfact *= static_cast<double>(i);
        return std::pow(dfact / std::exp2(static_cast<double>(d)) * nd * std::log(nd),
                        1.0 / (d + 1));
    }
    return explosion_constant(d).time * std::pow(static_cast<double>(n), static_cast<double>(d) / (d + 1));
}

struct ScalingRow {
    std::int64_t side = 0;
    double normalizer = 0.0;
    double kappa_ratio = 0.0; ///< deterministic lower bound / normalizer
    SampleSummary normalized; ///< tau / normalizer over trials
    SampleSummary tau;
};

struct ScalingReport {
    ExperimentPlan plan;
    std::vector<ScalingRow> rows;
};

inline ScalingReport tau_scaling_experiment(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.process == ProcessKind::Coupled)
        throw std::invalid_argument("tau scaling runs a single-process law, not the coupled hierarchy");
    ScalingReport report{plan, {}};
    for (std::int64_t n : plan.sides) {
        const TorusSpec spec(plan.dim, n);
        std::vector<double> taus(static_cast<std::size_t>(plan.trials));
        detail::parallel_for(plan.jobs, plan.trials, [&](int i) {
            const std::uint64_t seed = plan.seed_base + static_cast<std::uint64_t>(i);
            BurnTrace t;
            switch (plan.process) {
                case ProcessKind::CouponCollector: t = run_coupon_collector(spec, seed); break;
                case ProcessKind::RejectionSampling: t = run_rejection_sampling(spec, seed); break;
                default: t = run_rejection_sampling_literal(spec, seed); break;
            }
            taus[static_cast<std::size_t>(i)] = static_cast<double>(t.tau);
        });
        ScalingRow row;
        row.side = n;
        row.normalizer = tau_normalizer(plan.process, plan.dim, n);
        row.kappa_ratio = static_cast<double>(kappa_lower_bound(spec)) / row.normalizer;
        row.tau = summarize(taus);
        for (double& t : taus) t /= row.normalizer;
        row.normalized = summarize(taus);
        report.rows.push_back(row);
    }
    return report;
}

struct ProfileRow {
    std::int64_t side = 0;
    SampleSummary sup_deviation; ///< per-trial sup over the time grid
};

struct ProfileReport {
    ExperimentPlan plan;
    double horizon = 0.0; ///< t grid spans [0, horizon]
    std::vector<ProfileRow> rows;
};

/// Sup over the time grid of |empirical unburned fraction - 1/y^(d)(t)|,
/// with time rescaled by n^(d/(d+1)) and the empirical fraction looked up
/// right-continuously from the per-step counts.
inline ProfileReport functional_profile_experiment(const ExperimentPlan& plan,
                                                   const BlasiusOptions& solver_options = {}) {
    plan.validate();
    if (plan.process != ProcessKind::RejectionSampling &&
        plan.process != ProcessKind::LiteralRejectionSampling)
        throw std::invalid_argument("the functional limit applies to the rejection-sampling law");
    const BlasiusSolution sol = solve_blasius(plan.dim, solver_options);
    const double horizon = plan.t_fraction * sol.explosion_time;
    ProfileReport report{plan, horizon, {}};
    const int grid = plan.profile_points;
    std::vector<double> profile(static_cast<std::size_t>(grid));
    for (int g = 0; g < grid; ++g)
        profile[static_cast<std::size_t>(g)] =
            sol.limit_profile(horizon * static_cast<double>(g) / (grid - 1));

    for (std::int64_t n : plan.sides) {
        const TorusSpec spec(plan.dim, n);
        const double scale = std::pow(static_cast<double>(n), static_cast<double>(plan.dim) / (plan.dim + 1));
        const double nd = static_cast<double>(spec.vertex_count());
        std::vector<double> sups(static_cast<std::size_t>(plan.trials));
        detail::parallel_for(plan.jobs, plan.trials, [&](int i) {
            const std::uint64_t seed = plan.seed_base + static_cast<std::uint64_t>(i);
            const BurnTrace t = plan.process == ProcessKind::RejectionSampling
                                    ? run_rejection_sampling(spec, seed)
                                    : run_rejection_sampling_literal(spec, seed);
            double worst = 0.0;
            for (int g = 0; g < grid; ++g) {
                const double time = horizon * static_cast<double>(g) / (grid - 1);
                const auto k = static_cast<std::size_t>(std::floor(time * scale));
                const double unburned =
                    k < t.unburned_per_step.size()
                        ? static_cast<double>(t.unburned_per_step[k])
                        : 0.0;
                worst = std::max(worst,
                                 std::abs(unburned / nd - profile[static_cast<std::size_t>(g)]));
            }
            sups[static_cast<std::size_t>(i)] = worst;
        });
        report.rows.push_back({n, summarize(sups)});
    }
    return report;
}

struct PicardProfileRow {
    std::int64_t side = 0;
    int level = 0;
    SampleSummary sup_deviation;
};

struct PicardProfileReport {
    ExperimentPlan plan;
    double horizon = 0.0;
    std::vector<PicardProfileRow> rows;
};

/// Per level p of the coupled hierarchy, sup-deviation of the empirical
/// unburned fraction of that level from 1/f_p on [0, horizon]. Level 0 is
/// the empty process: its fraction is identically 1 = 1/f_0.
inline PicardProfileReport picard_profile_experiment(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.process != ProcessKind::Coupled)
        throw std::invalid_argument("picard profiles need the coupled process");
    if (plan.p_max < 1) throw std::invalid_argument("picard profiles need p_max >= 1");
    const ExplosionConstant frozen = explosion_constant(plan.dim);
    const double horizon = plan.t_fraction * frozen.time;
    const PicardIterates iterates =
        picard_iterates(plan.dim, plan.p_max, horizon, 4097, frozen.time);
    const int grid = plan.profile_points;

    PicardProfileReport report{plan, horizon, {}};
    for (std::int64_t n : plan.sides) {
        const TorusSpec spec(plan.dim, n);
        const double scale = std::pow(static_cast<double>(n), static_cast<double>(plan.dim) / (plan.dim + 1));
        const double nd = static_cast<double>(spec.vertex_count());
        const auto min_steps = static_cast<std::uint32_t>(std::ceil(horizon * scale)) + 1;
        // sups[trial][p-1]
        std::vector<std::vector<double>> sups(static_cast<std::size_t>(plan.trials));
        detail::parallel_for(plan.jobs, plan.trials, [&](int i) {
            const std::uint64_t seed = plan.seed_base + static_cast<std::uint64_t>(i);
            const CoupledRun run = run_coupled_hierarchy(spec, seed, plan.p_max, min_steps);
            std::vector<double> worst(static_cast<std::size_t>(plan.p_max), 0.0);
            for (int g = 0; g < grid; ++g) {
                const double time = horizon * static_cast<double>(g) / (grid - 1);
                const auto k = static_cast<std::size_t>(std::floor(time * scale));
                for (int p = 1; p <= plan.p_max; ++p) {
                    const auto& steps = run.levels[static_cast<std::size_t>(p - 1)].unburned_per_step;
                    const double unburned =
                        k < steps.size() ? static_cast<double>(steps[k]) : 0.0;
                    const double limit = 1.0 / iterates.eval(p, time);
                    worst[static_cast<std::size_t>(p - 1)] =
                        std::max(worst[static_cast<std::size_t>(p - 1)],
                                 std::abs(unburned / nd - limit));
                }
            }
            sups[static_cast<std::size_t>(i)] = std::move(worst);
        });
        // level 0: exact zero deviation by definition
        report.rows.push_back({n, 0, SampleSummary{static_cast<std::size_t>(plan.trials),
                                                   0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}});
        for (int p = 1; p <= plan.p_max; ++p) {
            std::vector<double> col(static_cast<std::size_t>(plan.trials));
            for (int i = 0; i < plan.trials; ++i)
                col[static_cast<std::size_t>(i)] = sups[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)];
            report.rows.push_back({n, p, summarize(col)});
        }
    }
    return report;
}

struct BoundsRow {
    std::int64_t side = 0;
    std::uint64_t kappa = 0;
    double kappa_ratio = 0.0; ///< kappa / n^(d/(d+1))
    std::uint64_t greedy_bound = 0;
    std::int64_t greedy_radius = 0;
    double greedy_ratio = 0.0; ///< best greedy bound / n^(d/(d+1)); 0 if skipped
};

struct BoundsReport {
    int dim = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::vector<BoundsRow> rows;
};

/// Radii tried for the covering bound: the volume-optimal
/// floor((d! d n^d)^(1/(d+1))) and its +-20% and +-10% neighbors.
inline std::vector<std::int64_t> cover_radius_grid(int d, std::int64_t n) {
    double dfact = 1.0;
    for (int i = 2; i <= d; ++i) dfact *= static_cast<double>(i);
    const double c = dfact * static_cast<double>(d);
    const double base = std::floor(std::pow(c * std::pow(static_cast<double>(n), d), 1.0 / (d + 1)));
    std::vector<std::int64_t> out;
    for (double f : {0.8, 0.9, 1.0, 1.1, 1.2}) {
        const auto r = static_cast<std::int64_t>(std::llround(base * f));
        if (r >= 1 && 2 * r < n && (out.empty() || out.back() != r)) out.push_back(r);
    }
    return out;
}

inline BoundsReport bounds_scaling_experiment(int d, const std::vector<std::int64_t>& sides,
                                              bool with_greedy = true) {
    BoundsReport report;
    report.dim = d;
    const auto constants = prop1_constants(d);
    report.alpha = constants.alpha;
    report.gamma = constants.gamma;
    for (std::int64_t n : sides) {
        const TorusSpec spec(d, n);
        BoundsRow row;
        row.side = n;
        row.kappa = kappa_lower_bound(spec);
        const double scale = std::pow(static_cast<double>(n), static_cast<double>(d) / (d + 1));
        row.kappa_ratio = static_cast<double>(row.kappa) / scale;
        if (with_greedy) {
            for (std::int64_t r : cover_radius_grid(d, n)) {
                const GreedyCover cover = greedy_cover_schedule(spec, r);
                if (row.greedy_bound == 0 || cover.bound < row.greedy_bound) {
                    row.greedy_bound = cover.bound;
                    row.greedy_radius = r;
                }
            }
            if (row.greedy_bound > 0)
                row.greedy_ratio = static_cast<double>(row.greedy_bound) / scale;
        }
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// report serialization (JSON mirror + CSV, one row per (n, statistic))

inline nlohmann::json summary_to_json(const SampleSummary& s) {
    return {{"count", s.count}, {"mean", s.mean},   {"stddev", s.stddev}, {"min", s.min},
            {"max", s.max},     {"q05", s.q05},     {"q25", s.q25},       {"q50", s.q50},
            {"q75", s.q75},     {"q95", s.q95}};
}

inline nlohmann::json plan_to_json(const ExperimentPlan& plan) {
    return {{"d", plan.dim},
            {"n", plan.sides},
            {"trials", plan.trials},
            {"seed_base", plan.seed_base},
            {"process", process_name(plan.process)},
            {"p_max", plan.p_max},
            {"profile_points", plan.profile_points},
            {"t_fraction", plan.t_fraction}};
}

inline nlohmann::json report_to_json(const ScalingReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.side},
                        {"normalizer", row.normalizer},
                        {"kappa_ratio", row.kappa_ratio},
                        {"normalized_tau", summary_to_json(row.normalized)},
                        {"tau", summary_to_json(row.tau)}});
    return {{"kind", "tau_scaling"}, {"plan", plan_to_json(r.plan)}, {"rows", rows}};
}

inline nlohmann::json report_to_json(const ProfileReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.side}, {"sup_deviation", summary_to_json(row.sup_deviation)}});
    return {{"kind", "functional_profile"},
            {"plan", plan_to_json(r.plan)},
            {"horizon", r.horizon},
            {"rows", rows}};
}

inline nlohmann::json report_to_json(const PicardProfileReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.side},
                        {"p", row.level},
                        {"sup_deviation", summary_to_json(row.sup_deviation)}});
    return {{"kind", "picard_profile"},
            {"plan", plan_to_json(r.plan)},
            {"horizon", r.horizon},
            {"rows", rows}};
}

inline nlohmann::json report_to_json(const BoundsReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.side},
                        {"kappa", row.kappa},
                        {"kappa_ratio", row.kappa_ratio},
                        {"greedy_bound", row.greedy_bound},
                        {"greedy_radius", row.greedy_radius},
                        {"greedy_ratio", row.greedy_ratio}});
    return {{"kind", "bounds_scaling"},
            {"d", r.dim},
            {"alpha", r.alpha},
            {"gamma", r.gamma},
            {"rows", rows}};
}

inline std::string report_to_csv(const ScalingReport& r) {
    std::string csv = "n,statistic,value\n";
    for (const auto& row : r.rows) {
        const std::string n = std::to_string(row.side);
        csv += n + ",normalizer," + std::to_string(row.normalizer) + "\n";
        csv += n + ",kappa_ratio," + std::to_string(row.kappa_ratio) + "\n";
        csv += n + ",normalized_tau_mean," + std::to_string(row.normalized.mean) + "\n";
        csv += n + ",normalized_tau_stddev," + std::to_string(row.normalized.stddev) + "\n";
        csv += n + ",normalized_tau_q05," + std::to_string(row.normalized.q05) + "\n";
        csv += n + ",normalized_tau_q95," + std::to_string(row.normalized.q95) + "\n";
        csv += n + ",tau_mean," + std::to_string(row.tau.mean) + "\n";
        csv += n + ",tau_q05," + std::to_string(row.tau.q05) + "\n";
        csv += n + ",tau_q95," + std::to_string(row.tau.q95) + "\n";
    }
    return csv;
}

inline std::string report_to_csv(const ProfileReport& r) {
    std::string csv = "n,statistic,value\n";
    for (const auto& row : r.rows) {
        const std::string n = std::to_string(row.side);
        csv += n + ",sup_deviation_mean," + std::to_string(row.sup_deviation.mean) + "\n";
        csv += n + ",sup_deviation_q95," + std::to_string(row.sup_deviation.q95) + "\n";
    }
    return csv;
}

inline std::string report_to_csv(const PicardProfileReport& r) {
    std::string csv = "n,p,sup_deviation_mean,sup_deviation_q95\n";
    for (const auto& row : r.rows)
        csv += std::to_string(row.side) + "," + std::to_string(row.level) + "," +
               std::to_string(row.sup_deviation.mean) + "," +
               std::to_string(row.sup_deviation.q95) + "\n";
    return csv;
}

inline std::string report_to_csv(const BoundsReport& r) {
    std::string csv = "n,kappa,kappa_ratio,greedy_bound,greedy_radius,greedy_ratio\n";
    for (const auto& row : r.rows)
        csv += std::to_string(row.side) + "," + std::to_string(row.kappa) + "," +
               std::to_string(row.kappa_ratio) + "," + std::to_string(row.greedy_bound) + "," +
               std::to_string(row.greedy_radius) + "," + std::to_string(row.greedy_ratio) + "\n";
    return csv;
}

} // namespace torusburn
