#include <doctest.h>

#include <cmath>
#include <random>

#include "torusburn/stats.hpp"

using namespace torusburn;

TEST_CASE("chi-square CDF against closed forms") {
    // df = 2: CDF(x) = 1 - exp(-x/2)
    for (double x : {0.1, 1.0, 2.0, 5.0, 10.0})
        CHECK(chi_square_cdf(2, x) == doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-12));
    // df = 1: CDF(x) = erf(sqrt(x/2))
    for (double x : {0.5, 1.0, 3.841, 6.635})
        CHECK(chi_square_cdf(1, x) == doctest::Approx(std::erf(std::sqrt(x / 2.0))).epsilon(1e-10));
    // df = 4: CDF(x) = 1 - (1 + x/2) exp(-x/2)
    for (double x : {1.0, 4.0, 9.0})
        CHECK(chi_square_cdf(4, x) ==
              doctest::Approx(1.0 - (1.0 + x / 2.0) * std::exp(-x / 2.0)).epsilon(1e-12));
    CHECK(chi_square_cdf(5, 0.0) == 0.0);
}

TEST_CASE("goodness-of-fit statistic") {
    const auto res = chi_square_goodness({10, 10, 10, 10}, {10, 10, 10, 10});
    CHECK(res.statistic == 0.0);
    CHECK(res.p_value == doctest::Approx(1.0));
    const auto skew = chi_square_goodness({40, 0, 0, 0}, {10, 10, 10, 10});
    CHECK(skew.p_value < 1e-6);
}

TEST_CASE("two-sample chi-square accepts same-law samples and rejects different laws") {
    std::mt19937_64 rng(11);
    std::binomial_distribution<int> law(30, 0.4);
    std::vector<std::int64_t> a, b, c;
    for (int i = 0; i < 4000; ++i) a.push_back(law(rng));
    for (int i = 0; i < 4000; ++i) b.push_back(law(rng));
    std::binomial_distribution<int> other(30, 0.46);
    for (int i = 0; i < 4000; ++i) c.push_back(other(rng));
    CHECK(two_sample_chi_square(a, b).p_value > 0.01);
    CHECK(two_sample_chi_square(a, c).p_value < 1e-6);
    // identical histograms give statistic exactly 0
    CHECK(two_sample_chi_square(a, a).statistic == 0.0);
}

TEST_CASE("summaries") {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(s.count == 5);
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)));
    CHECK(s.min == 1.0);
    CHECK(s.max == 5.0);
    CHECK(s.q50 == doctest::Approx(3.0));
    CHECK(quantile_sorted({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}
