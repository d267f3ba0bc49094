#include <doctest.h>

#include <cmath>

#include "torusburn/experiments.hpp"

using namespace torusburn;

TEST_CASE("plan validation") {
    ExperimentPlan plan;
    plan.sides = {100, 50};
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.sides = {2};
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument); // drivers reject n < 3
    plan.sides = {50};
    plan.trials = 0;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.trials = 2;
    plan.validate();
    plan.dim = 3;
    plan.sides = {1 << 10};
    CHECK_THROWS_AS(plan.validate(), ResourceLimitError); // 2^30 vertices
}

TEST_CASE("tau scaling report is deterministic and dominates kappa") {
    ExperimentPlan plan;
    plan.dim = 1;
    plan.sides = {400, 900};
    plan.trials = 25;
    plan.seed_base = 10;
    plan.process = ProcessKind::RejectionSampling;
    plan.jobs = 4;
    const auto a = tau_scaling_experiment(plan);
    plan.jobs = 1;
    const auto b = tau_scaling_experiment(plan);
    REQUIRE(a.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.rows[i].normalized.mean == b.rows[i].normalized.mean);
        CHECK(a.rows[i].tau.min == b.rows[i].tau.min);
        CHECK(a.rows[i].normalized.min >= a.rows[i].kappa_ratio); // tau >= kappa always
    }
    // n = 900 is a perfect square: kappa/sqrt(n) = 1 exactly, and the
    // rejection-sampling normalizer uses the frozen T(1) = pi/2
    CHECK(a.rows[1].normalizer == doctest::Approx(M_PI_2 * 30.0).epsilon(1e-12));
}

TEST_CASE("coupon-collector normalizer formula") {
    CHECK(tau_normalizer(ProcessKind::CouponCollector, 1, 10000) ==
          doctest::Approx(std::sqrt(10000.0 * std::log(10000.0) / 2.0)).epsilon(1e-12));
    CHECK(tau_normalizer(ProcessKind::CouponCollector, 2, 100) ==
          doctest::Approx(std::pow(0.5 * 10000.0 * std::log(10000.0), 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("functional profile deviations shrink as n grows") {
    ExperimentPlan plan;
    plan.dim = 1;
    plan.sides = {400, 1600, 6400};
    plan.trials = 30;
    plan.seed_base = 77;
    plan.process = ProcessKind::RejectionSampling;
    plan.jobs = 4;
    const auto report = functional_profile_experiment(plan);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].sup_deviation.mean > report.rows[1].sup_deviation.mean);
    CHECK(report.rows[1].sup_deviation.mean > report.rows[2].sup_deviation.mean);
    CHECK(report.rows[2].sup_deviation.mean < 0.05);
    CHECK(report.horizon == doctest::Approx(0.95 * explosion_constant(1).time).epsilon(1e-9));
}

TEST_CASE("picard profiles track the iterate limits level by level") {
    ExperimentPlan plan;
    plan.dim = 1;
    plan.sides = {10000};
    plan.trials = 50;
    plan.seed_base = 500;
    plan.process = ProcessKind::Coupled;
    plan.p_max = 4;
    plan.t_fraction = 0.9;
    plan.jobs = 4;
    const auto report = picard_profile_experiment(plan);
    REQUIRE(report.rows.size() == 5); // levels 0..4
    CHECK(report.rows[0].level == 0);
    CHECK(report.rows[0].sup_deviation.mean == 0.0); // empty process: fraction == 1 == 1/f_0
    // level 1 is the coupon-collector process against 1/f_1 = exp(-2 t^2/2!);
    // deeper levels track their own iterates
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].level == static_cast<int>(i));
        CHECK(report.rows[i].sup_deviation.mean <= 0.05);
    }
}

TEST_CASE("bounds scaling report") {
    const auto report = bounds_scaling_experiment(1, {100, 10000});
    CHECK(report.alpha == doctest::Approx(1.0));
    CHECK(report.gamma == doctest::Approx(2.0));
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].kappa == 10);
    CHECK(report.rows[0].kappa_ratio == doctest::Approx(1.0));
    CHECK(report.rows[1].kappa_ratio == doctest::Approx(1.0));
    for (const auto& row : report.rows) {
        CHECK(row.greedy_bound > 0);
        CHECK(row.greedy_ratio >= row.kappa_ratio); // upper bound dominates lower bound
        CHECK(row.greedy_ratio <= 1.05 * report.gamma);
    }
}

TEST_CASE("kappa ratio approaches alpha from one side as n grows") {
    for (int d : {2, 3}) {
        const auto report =
            bounds_scaling_experiment(d, {100, 1000, 10000, 100000, 1000000}, false);
        const double alpha = report.alpha;
        double prev_gap = 1e9;
        for (const auto& row : report.rows) {
            const double gap = std::abs(row.kappa_ratio - alpha);
            CHECK(gap <= prev_gap + 1e-3); // shrinking finite-size error
            prev_gap = gap;
        }
        CHECK(prev_gap <= 0.02 * alpha);
    }
}

TEST_CASE("report serialization") {
    ExperimentPlan plan;
    plan.dim = 1;
    plan.sides = {64};
    plan.trials = 5;
    plan.process = ProcessKind::CouponCollector;
    const auto report = tau_scaling_experiment(plan);
    const auto j = report_to_json(report);
    CHECK(j.at("kind") == "tau_scaling");
    CHECK(j.at("plan").at("process") == "cc");
    CHECK(j.at("rows").size() == 1);
    CHECK(j.at("rows")[0].at("normalized_tau").at("count") == 5);
    const std::string csv = report_to_csv(report);
    CHECK(csv.find("n,statistic,value\n") == 0);
    CHECK(csv.find("64,normalized_tau_mean,") != std::string::npos);
}
