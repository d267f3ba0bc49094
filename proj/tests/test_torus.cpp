#include <doctest.h>

#include <random>
#include <set>

#include "torusburn/torus.hpp"

using namespace torusburn;

namespace {

// independent oracle: enumerate the (2r+1)^d box around the origin
std::uint64_t brute_ball_zd(int d, std::int64_t r) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), -r);
    std::uint64_t count = 0;
    for (;;) {
        std::int64_t norm = 0;
        for (std::int64_t c : x) norm += c < 0 ? -c : c;
        if (norm <= r) ++count;
        int axis = d - 1;
        while (axis >= 0 && x[static_cast<std::size_t>(axis)] == r) {
            x[static_cast<std::size_t>(axis)] = -r;
            --axis;
        }
        if (axis < 0) break;
        ++x[static_cast<std::size_t>(axis)];
    }
    return count;
}

// independent oracle: breadth-first ball on the torus
std::uint64_t brute_ball_torus(const TorusSpec& spec, std::int64_t r) {
    std::uint64_t count = 0;
    for (VertexIndex v = 0; v < spec.vertex_count(); ++v)
        if (l1_torus_distance(0, v, spec) <= r) ++count;
    return count;
}

// independent oracle: wrap-choice enumeration of the torus distance
std::int64_t brute_distance(VertexIndex a, VertexIndex b, const TorusSpec& spec) {
    const auto ca = spec.coords_of(a), cb = spec.coords_of(b);
    std::int64_t total = 0;
    for (int i = 0; i < spec.dim(); ++i) {
        std::int64_t best = spec.side() * 2;
        for (std::int64_t shift : {-spec.side(), std::int64_t{0}, spec.side()}) {
            const std::int64_t diff = ca[static_cast<std::size_t>(i)] -
                                      (cb[static_cast<std::size_t>(i)] + shift);
            best = std::min(best, diff < 0 ? -diff : diff);
        }
        total += best;
    }
    return total;
}

} // namespace

TEST_CASE("l1 torus distance examples") {
    TorusSpec c10(1, 10);
    CHECK(l1_torus_distance(c10.index_of({0}), c10.index_of({9}), c10) == 1);
    TorusSpec t5(2, 5);
    CHECK(l1_torus_distance(t5.index_of({0, 0}), t5.index_of({0, 0}), t5) == 0);
    TorusSpec t6(2, 6);
    CHECK(l1_torus_distance(t6.index_of({1, 1}), t6.index_of({4, 5}), t6) == 5);
}

TEST_CASE("l1 torus distance is a metric (random sampling)") {
    std::mt19937_64 rng(7);
    for (int d = 1; d <= 3; ++d) {
        TorusSpec spec(d, 7);
        std::uniform_int_distribution<VertexIndex> pick(0, spec.vertex_count() - 1);
        for (int it = 0; it < 300; ++it) {
            const VertexIndex a = pick(rng), b = pick(rng), c = pick(rng);
            const auto dab = l1_torus_distance(a, b, spec);
            CHECK(dab == brute_distance(a, b, spec));
            CHECK(dab == l1_torus_distance(b, a, spec));
            CHECK((dab == 0) == (a == b));
            CHECK(dab <= l1_torus_distance(a, c, spec) + l1_torus_distance(c, b, spec));
        }
    }
}

TEST_CASE("flat index round-trips through coordinates") {
    for (int d = 1; d <= 4; ++d) {
        TorusSpec spec(d, 5);
        for (VertexIndex v = 0; v < spec.vertex_count(); v += 7) {
            const auto coords = spec.coords_of(v);
            CHECK(spec.index_of(coords) == v);
        }
    }
}

TEST_CASE("ball volumes in Z^d") {
    CHECK(ball_volume_zd(1, 3) == 7);
    CHECK(ball_volume_zd(3, 1) == 7);
    CHECK(ball_volume_zd(2, 2) == 13);
    for (int d = 1; d <= 4; ++d)
        for (std::int64_t r = 0; r <= 20; ++r)
            CHECK(ball_volume_zd(d, r) == brute_ball_zd(d, r));
}

TEST_CASE("ball volume count overflow is detected") {
    CHECK_THROWS_AS(ball_volume_zd(40, 1000), std::overflow_error);
}

TEST_CASE("torus ball volumes") {
    TorusSpec c10(1, 10);
    CHECK(ball_volume_torus(c10, 4) == 9);
    CHECK(ball_volume_torus(c10, 5) == 10);
    // boundary effects at r = n/2: the Z^2 value 13 shrinks to 11
    TorusSpec t4(2, 4);
    CHECK(ball_volume_torus(t4, 2) == 11);
    CHECK(ball_volume_torus(t4, 2) == brute_ball_torus(t4, 2));
}

TEST_CASE("torus ball volume equals the BFS oracle and the Z^d count below n/2") {
    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t n : {1, 2, 3, 4, 5, 6, 8, 9}) {
            TorusSpec spec(d, n);
            const std::int64_t diameter = d * (n / 2);
            std::uint64_t prev = 0;
            for (std::int64_t r = 0; r <= diameter + 1; ++r) {
                const std::uint64_t vol = ball_volume_torus(spec, r);
                CHECK(vol == brute_ball_torus(spec, r));
                if (2 * r < n) CHECK(vol == ball_volume_zd(d, r));
                CHECK(vol >= prev); // nondecreasing, capped at n^d
                CHECK(vol <= spec.vertex_count());
                prev = vol;
            }
            CHECK(prev == spec.vertex_count());
        }
    }
}

TEST_CASE("neighbors") {
    TorusSpec c5(1, 5);
    auto nb = neighbors(c5.index_of({0}), c5);
    CHECK(std::set<VertexIndex>(nb.begin(), nb.end()) ==
          std::set<VertexIndex>{c5.index_of({1}), c5.index_of({4})});
    TorusSpec t3(2, 3);
    nb = neighbors(t3.index_of({1, 1}), t3);
    CHECK(std::set<VertexIndex>(nb.begin(), nb.end()) ==
          std::set<VertexIndex>{t3.index_of({0, 1}), t3.index_of({2, 1}), t3.index_of({1, 0}),
                                t3.index_of({1, 2})});
    TorusSpec c2(1, 2);
    nb = neighbors(c2.index_of({0}), c2);
    CHECK(nb == std::vector<VertexIndex>{c2.index_of({1})}); // de-duplicated wrap
    TorusSpec c1(1, 1);
    CHECK(neighbors(0, c1).empty());
    // degree 2d once n >= 3
    for (int d = 1; d <= 3; ++d) {
        TorusSpec spec(d, 4);
        CHECK(neighbors(0, spec).size() == static_cast<std::size_t>(2 * d));
        for (VertexIndex w : neighbors(0, spec)) CHECK(l1_torus_distance(0, w, spec) == 1);
    }
}

TEST_CASE("torus parameter validation") {
    CHECK_THROWS_AS(TorusSpec(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(TorusSpec(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(TorusSpec(9, 1000000), std::overflow_error); // 10^54 vertices
    TorusSpec big(3, 1000000);                                   // 10^18 fits 64-bit indexing
    CHECK(big.vertex_count() == 1000000000000000000ull);
}
