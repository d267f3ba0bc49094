#include <doctest.h>

#include <cmath>

#include "torusburn/burn.hpp"
#include "torusburn/processes.hpp"
#include "torusburn/stats.hpp"

using namespace torusburn;

TEST_CASE("coupon collector on trivial tori") {
    TorusSpec c1(1, 1);
    for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(run_coupon_collector(c1, seed).tau == 1);
    // on C_3 the dilation of any single vertex covers the cycle at step 2
    TorusSpec c3(1, 3);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto trace = run_coupon_collector(c3, seed);
        CHECK(trace.tau == 2);
        CHECK(trace.unburned_per_step.back() == 0);
    }
}

TEST_CASE("rejection sampling on C_2 always finishes at step 2") {
    TorusSpec c2(1, 2);
    for (std::uint64_t seed = 0; seed < 8; ++seed) CHECK(run_rejection_sampling(c2, seed).tau == 2);
}

TEST_CASE("traces are deterministic and well-formed") {
    TorusSpec spec(2, 12);
    for (auto runner : {run_coupon_collector, run_rejection_sampling, run_rejection_sampling_literal}) {
        const auto a = runner(spec, 77, RunOptions{true});
        const auto b = runner(spec, 77, RunOptions{true});
        CHECK(a.tau == b.tau);
        CHECK(a.unburned_per_step == b.unburned_per_step);
        CHECK(a.ignitions == b.ignitions);
        CHECK(a.burn_time == b.burn_time);

        CHECK(a.unburned_per_step.size() == a.tau + 1);
        CHECK(a.unburned_per_step.front() == spec.vertex_count());
        CHECK(a.unburned_per_step.back() == 0);
        for (std::size_t k = 1; k < a.unburned_per_step.size(); ++k) {
            CHECK(a.unburned_per_step[k] <= a.unburned_per_step[k - 1]);
            CHECK(a.unburned_per_step[k - 1] > 0);
        }
        CHECK(a.ignitions.size() == a.tau);
        for (std::size_t i = 0; i < a.ignitions.size(); ++i)
            CHECK(a.burn_time[a.ignitions[i]] <= i + 1);
    }
}

TEST_CASE("every sampled tau dominates the volume lower bound") {
    for (int d = 1; d <= 2; ++d) {
        TorusSpec spec(d, d == 1 ? 60 : 9);
        const auto kappa = kappa_lower_bound(spec);
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            CHECK(run_coupon_collector(spec, seed).tau >= kappa);
            CHECK(run_rejection_sampling(spec, seed).tau >= kappa);
            CHECK(run_rejection_sampling_literal(spec, seed).tau >= kappa);
        }
    }
}

TEST_CASE("rejection ignitions always land on unburned vertices") {
    TorusSpec spec(1, 40);
    const auto trace = run_rejection_sampling(spec, 5, RunOptions{true});
    // the i-th ignition is drawn before step i's dilation, so it burns at
    // step <= i; a vertex drawn from the complement can never repeat
    std::vector<int> seen(spec.vertex_count(), 0);
    for (VertexIndex v : trace.ignitions) {
        CHECK(seen[v] == 0);
        seen[v] = 1;
    }
}

TEST_CASE("level 1 of the coupled hierarchy is the coupon-collector process") {
    TorusSpec spec(1, 50);
    const auto cc = run_coupon_collector(spec, 31);
    // the star process may cover before the coupon-collector level does, so
    // extend the horizon to the coupon-collector's tau
    const auto run = run_coupled_hierarchy(spec, 31, 1, cc.tau);
    const auto& level1 = run.levels[0];
    for (std::size_t i = 0; i < level1.attempt_index.size(); ++i)
        CHECK(level1.attempt_index[i] == 1); // empty level 0 forces the infimum to 1
    REQUIRE(level1.ignitions.size() >= cc.ignitions.size());
    for (std::size_t i = 0; i < cc.ignitions.size(); ++i)
        CHECK(level1.ignitions[i] == cc.ignitions[i]);
    for (std::size_t k = 0; k < cc.unburned_per_step.size(); ++k)
        CHECK(level1.unburned_per_step[k] == cc.unburned_per_step[k]);
}

TEST_CASE("coupled hierarchy satisfies the pointwise inclusions") {
    TorusSpec spec(1, 200);
    int checked_steps = 0;
    const CoupledObserver observer = [&](std::uint32_t, const std::vector<BurnState>& levels,
                                         const BurnState& star) {
        for (std::size_t p = 0; p + 1 < levels.size(); ++p)
            for (VertexIndex v = 0; v < spec.vertex_count(); ++v)
                if (levels[p].is_burned(v)) REQUIRE(levels[p + 1].is_burned(v));
        for (VertexIndex v = 0; v < spec.vertex_count(); ++v)
            if (levels.back().is_burned(v)) REQUIRE(star.is_burned(v));
        ++checked_steps;
    };
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const auto run = run_coupled_hierarchy(spec, seed, 3, 0, observer);
        CHECK(run.star.attempt_index[0] == 1); // nothing burned yet, infimum at 1
        // attempt indices are monotone in the level
        for (std::size_t i = 0; i < run.star.attempt_index.size(); ++i) {
            for (int p = 0; p + 1 < 3; ++p)
                CHECK(run.levels[static_cast<std::size_t>(p)].attempt_index[i] <=
                      run.levels[static_cast<std::size_t>(p) + 1].attempt_index[i]);
            CHECK(run.levels[2].attempt_index[i] <= run.star.attempt_index[i]);
        }
        CHECK(run.star.tau.has_value());
        CHECK(run.star.unburned_per_step.back() == 0);
    }
    CHECK(checked_steps > 0);
}

TEST_CASE("coupled hierarchy honors a longer horizon") {
    TorusSpec spec(1, 30);
    const auto run = run_coupled_hierarchy(spec, 9, 2, 60);
    CHECK(run.steps >= 60);
    CHECK(run.star.tau.has_value());
    CHECK(*run.star.tau <= run.steps);
    // star process is absorbing after coverage
    for (std::size_t k = *run.star.tau; k < run.star.unburned_per_step.size(); ++k)
        CHECK(run.star.unburned_per_step[k] == 0);
}

TEST_CASE("d=1 rejection sampling concentrates near (pi/2) sqrt(n)") {
    TorusSpec spec(1, 2500);
    double sum = 0;
    const int trials = 40;
    for (int i = 0; i < trials; ++i) sum += run_rejection_sampling(spec, 100 + i).tau;
    const double mean = sum / trials / std::sqrt(2500.0);
    CHECK(mean > M_PI_2 * 0.9);
    CHECK(mean < M_PI_2 * 1.1);
}
