#pragma once

// Random ignition laws driving the burn engine, all fed from one
// counter-based randomness table:
//   - coupon collector: each ignition uniform on the whole torus,
//   - rejection sampling: each ignition uniform on the current unburned set,
//     drawn directly from the O(1) unburned index (same law as literal
//     rejection, without the Theta(n^d) expected attempts near the end),
//   - literal rejection sampling: walk attempts h = 1, 2, ... through the
//     table until one lands outside the burned set (distributional oracle),
//   - the coupled hierarchy: intermediate levels where level p+1 rejects
//     attempts landing in level p's burned set, sandwiched below the true
//     rejection-sampling process.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "torusburn/burn.hpp"
#include "torusburn/errors.hpp"
#include "torusburn/randomness.hpp"
#include "torusburn/torus.hpp"

namespace torusburn {

/// Attempt index recorded when the rejected set is the whole torus
/// (infimum over an empty set); the ignition then falls back to attempt 1.
inline constexpr std::uint64_t kAttemptInfinity = std::numeric_limits<std::uint64_t>::max();

struct RunOptions {
    bool keep_burn_time = false;
};

namespace detail {

inline BurnTrace finish_trace(const BurnState& state, std::vector<std::uint64_t> unburned,
                              std::vector<VertexIndex> ignitions, const RunOptions& opt) {
    BurnTrace trace;
    trace.dim = state.spec().dim();
    trace.side = state.spec().side();
    trace.tau = state.step_count();
    trace.unburned_per_step = std::move(unburned);
    trace.ignitions = std::move(ignitions);
    if (opt.keep_burn_time) trace.burn_time = state.burn_times();
    return trace;
}

} // namespace detail

/// Ignitions drawn i.i.d. uniform on the whole torus (table attempt h = 1).
inline BurnTrace run_coupon_collector(const TorusSpec& spec, std::uint64_t seed,
                                      const RunOptions& opt = {}) {
    BurnState state(spec);
    RandomnessTable table(seed, spec);
    std::vector<std::uint64_t> unburned{state.unburned_count()};
    std::vector<VertexIndex> ignitions;
    while (!state.complete()) {
        const VertexIndex x = table.vertex(state.step_count() + 1, 1);
        state.step(x);
        ignitions.push_back(x);
        unburned.push_back(state.unburned_count());
    }
    return detail::finish_trace(state, std::move(unburned), std::move(ignitions), opt);
}

/// Each ignition uniform on the complement of the burned set before dilation,
/// drawn in O(1) from the unburned index.
inline BurnTrace run_rejection_sampling(const TorusSpec& spec, std::uint64_t seed,
                                        const RunOptions& opt = {}) {
    BurnState state(spec);
    RandomnessTable table(seed, spec);
    std::vector<std::uint64_t> unburned{state.unburned_count()};
    std::vector<VertexIndex> ignitions;
    while (!state.complete()) {
        const std::uint64_t pos = table.below(state.step_count() + 1, 1, state.unburned_count());
        const VertexIndex y = state.unburned_at(pos);
        state.step(y);
        ignitions.push_back(y);
        unburned.push_back(state.unburned_count());
    }
    return detail::finish_trace(state, std::move(unburned), std::move(ignitions), opt);
}

/// The literal construction: Y_{k+1} is the first table attempt landing
/// outside the current burned set. Same law as run_rejection_sampling.
inline BurnTrace run_rejection_sampling_literal(const TorusSpec& spec, std::uint64_t seed,
                                                const RunOptions& opt = {}) {
    BurnState state(spec);
    RandomnessTable table(seed, spec);
    std::vector<std::uint64_t> unburned{state.unburned_count()};
    std::vector<VertexIndex> ignitions;
    while (!state.complete()) {
        const std::uint64_t i = state.step_count() + 1;
        VertexIndex y = table.vertex(i, 1);
        for (std::uint64_t h = 2; state.is_burned(y); ++h) y = table.vertex(i, h);
        state.step(y);
        ignitions.push_back(y);
        unburned.push_back(state.unburned_count());
    }
    return detail::finish_trace(state, std::move(unburned), std::move(ignitions), opt);
}

/// One level of the coupled hierarchy (or the star process).
struct CoupledLevel {
    std::vector<std::uint64_t> unburned_per_step; ///< index k = 0..steps
    std::vector<std::uint64_t> attempt_index;     ///< H_i, i = 1..steps (kAttemptInfinity allowed)
    std::vector<VertexIndex> ignitions;           ///< Y_i, i = 1..steps
    std::optional<std::uint32_t> tau;             ///< unset if coverage not reached by the horizon
};

/// Synchronized run of the intermediate processes and the star process off a
/// shared randomness table. levels[p-1] holds level p (level 0 is empty
/// forever and is not materialized).
struct CoupledRun {
    int dim = 0;
    std::int64_t side = 0;
    std::uint32_t steps = 0;
    std::vector<CoupledLevel> levels;
    CoupledLevel star;
};

/// Called after every step of a coupled run with the realized level states
/// (index p-1 holds level p) and the star state; lets callers verify the
/// pointwise coupling invariants without storing per-step masks.
using CoupledObserver =
    std::function<void(std::uint32_t step, const std::vector<BurnState>& levels, const BurnState& star)>;

/// Runs levels 1..p_max and the star process in lockstep until the star
/// process covers the torus and at least min_steps steps have elapsed.
/// All levels consume the same table entries X_i^h.
inline CoupledRun run_coupled_hierarchy(const TorusSpec& spec, std::uint64_t seed, int p_max,
                                        std::uint32_t min_steps = 0,
                                        const CoupledObserver& observer = nullptr) {
    if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");
    if (p_max > 16) throw ResourceLimitError("coupled hierarchy restricted to p_max <= 16");
    const std::uint64_t per_level_bytes = spec.vertex_count() * 21;
    if (per_level_bytes * static_cast<std::uint64_t>(p_max + 1) > (1ull << 31))
        throw ResourceLimitError("coupled hierarchy memory budget exceeded");

    RandomnessTable table(seed, spec);
    std::vector<BurnState> levels;
    levels.reserve(static_cast<std::size_t>(p_max));
    for (int p = 1; p <= p_max; ++p) levels.emplace_back(spec);
    BurnState star(spec);

    CoupledRun run;
    run.dim = spec.dim();
    run.side = spec.side();
    run.levels.resize(static_cast<std::size_t>(p_max));
    for (auto& lvl : run.levels) lvl.unburned_per_step.push_back(spec.vertex_count());
    run.star.unburned_per_step.push_back(spec.vertex_count());

    const auto record = [](CoupledLevel& out, const BurnState& st, std::uint64_t h, VertexIndex y) {
        out.attempt_index.push_back(h);
        out.ignitions.push_back(y);
        out.unburned_per_step.push_back(st.unburned_count());
        if (!out.tau && st.complete()) out.tau = st.step_count();
    };

    std::uint32_t k = 0;
    while (!star.complete() || k < min_steps) {
        const std::uint64_t i = k + 1;
        // choose every level's ignition against the time-k burned sets first
        std::vector<std::pair<std::uint64_t, VertexIndex>> picks;
        picks.reserve(static_cast<std::size_t>(p_max) + 1);
        for (int p = 1; p <= p_max; ++p) {
            if (p == 1) {
                // level 0 is empty forever, so the infimum is attempt 1
                picks.emplace_back(1, table.vertex(i, 1));
                continue;
            }
            const BurnState& below = levels[static_cast<std::size_t>(p - 2)];
            if (below.complete()) {
                picks.emplace_back(kAttemptInfinity, table.vertex(i, 1));
                continue;
            }
            std::uint64_t h = 1;
            VertexIndex y = table.vertex(i, 1);
            while (below.is_burned(y)) y = table.vertex(i, ++h);
            picks.emplace_back(h, y);
        }
        std::uint64_t star_h;
        VertexIndex star_y;
        if (star.complete()) {
            star_h = kAttemptInfinity;
            star_y = table.vertex(i, 1);
        } else {
            star_h = 1;
            star_y = table.vertex(i, 1);
            while (star.is_burned(star_y)) star_y = table.vertex(i, ++star_h);
        }
        // then advance everything one step
        for (int p = 1; p <= p_max; ++p) {
            auto& [h, y] = picks[static_cast<std::size_t>(p - 1)];
            levels[static_cast<std::size_t>(p - 1)].step(y);
            record(run.levels[static_cast<std::size_t>(p - 1)], levels[static_cast<std::size_t>(p - 1)], h, y);
        }
        star.step(star_y);
        record(run.star, star, star_h, star_y);
        ++k;
        if (observer) observer(k, levels, star);
    }
    run.steps = k;
    return run;
}

} // namespace torusburn
