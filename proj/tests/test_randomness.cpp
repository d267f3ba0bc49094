#include <doctest.h>

#include <cmath>
#include <vector>

#include "torusburn/processes.hpp"
#include "torusburn/randomness.hpp"
#include "torusburn/stats.hpp"

using namespace torusburn;

TEST_CASE("table entries are pure functions of (seed, i, h)") {
    TorusSpec spec(2, 13);
    RandomnessTable a(42, spec), b(42, spec), c(43, spec);
    int differ = 0;
    for (std::uint64_t i = 1; i <= 50; ++i) {
        for (std::uint64_t h = 1; h <= 5; ++h) {
            CHECK(a.vertex(i, h) == b.vertex(i, h));
            CHECK(a.vertex(i, h) < spec.vertex_count());
            if (a.vertex(i, h) != c.vertex(i, h)) ++differ;
        }
    }
    CHECK(differ > 200); // different seeds give an essentially different table
}

TEST_CASE("first-draw frequencies pass chi-square on 16 vertices") {
    TorusSpec spec(1, 16);
    std::vector<double> observed(16, 0.0);
    const int draws = 100000;
    for (int seed = 0; seed < draws; ++seed) {
        RandomnessTable t(static_cast<std::uint64_t>(seed), spec);
        observed[t.vertex(1, 1)] += 1.0;
    }
    const std::vector<double> expected(16, draws / 16.0);
    const auto res = chi_square_goodness(observed, expected);
    CHECK(res.degrees_of_freedom == 15);
    CHECK(res.p_value > 0.01);
}

TEST_CASE("across-entry uniformity within one table") {
    TorusSpec spec(2, 4);
    RandomnessTable t(1234, spec);
    std::vector<double> observed(16, 0.0);
    const int draws = 100000;
    for (int i = 1; i <= draws; ++i) observed[t.vertex(static_cast<std::uint64_t>(i), 1)] += 1.0;
    const auto res = chi_square_goodness(observed, std::vector<double>(16, draws / 16.0));
    CHECK(res.p_value > 0.01);
}

TEST_CASE("complement draws are unbiased on a frozen mid-run state") {
    // freeze a state mid-run, then histogram fresh unburned-index draws
    TorusSpec spec(1, 64);
    BurnState st(spec);
    RandomnessTable drive(99, spec);
    for (int k = 0; k < 3; ++k) st.step(drive.vertex(st.step_count() + 1, 1));
    const std::uint64_t u = st.unburned_count();
    REQUIRE(u > 10);
    std::vector<double> hits(spec.vertex_count(), 0.0);
    const int draws = 100000;
    for (int seed = 0; seed < draws; ++seed) {
        RandomnessTable t(200000 + static_cast<std::uint64_t>(seed), spec);
        hits[st.unburned_at(t.below(1, 1, u))] += 1.0;
    }
    const double p = 1.0 / static_cast<double>(u);
    const double sigma = std::sqrt(p * (1 - p) * draws);
    for (VertexIndex v = 0; v < spec.vertex_count(); ++v) {
        if (st.is_burned(v)) CHECK(hits[v] == 0.0);
        else CHECK(std::abs(hits[v] - p * draws) <= 5.0 * sigma);
    }
}

TEST_CASE("bounded draws reject the biased top interval") {
    TorusSpec spec(1, 3);
    RandomnessTable t(7, spec);
    std::vector<double> counts(3, 0.0);
    for (int i = 1; i <= 90000; ++i) counts[t.below(static_cast<std::uint64_t>(i), 2, 3)] += 1.0;
    const auto res = chi_square_goodness(counts, std::vector<double>(3, 30000.0));
    CHECK(res.p_value > 0.01);
}
