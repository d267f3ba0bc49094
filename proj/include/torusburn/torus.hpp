#pragma once

// Geometry of the discrete torus (Z/nZ)^d with the L1 graph metric:
// flat row-major vertex indexing, wrap-around distance, exact closed-ball
// volumes, neighbor iteration.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusburn/errors.hpp"

namespace torusburn {

using VertexIndex = std::uint64_t;

namespace detail {

inline std::uint64_t checked_add_u64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("count overflows 64-bit range");
    return r;
}

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("count overflows 64-bit range");
    return r;
}

} // namespace detail

/// Dimension d and side length n of the torus (Z/nZ)^d. Vertices are
/// identified with flat row-major indices in [0, n^d); the last axis is
/// the fastest-varying one.
class TorusSpec {
public:
    TorusSpec(int dim, std::int64_t side) : dim_(dim), side_(side) {
        if (dim < 1) throw std::invalid_argument("torus dimension must be >= 1");
        if (side < 1) throw std::invalid_argument("torus side length must be >= 1");
        std::uint64_t count = 1;
        for (int i = 0; i < dim; ++i)
            count = detail::checked_mul_u64(count, static_cast<std::uint64_t>(side));
        vertex_count_ = count;
    }

    int dim() const { return dim_; }
    std::int64_t side() const { return side_; }
    std::uint64_t vertex_count() const { return vertex_count_; }

    std::vector<std::int64_t> coords_of(VertexIndex v) const {
        std::vector<std::int64_t> c(static_cast<std::size_t>(dim_));
        const auto n = static_cast<std::uint64_t>(side_);
        for (int i = dim_ - 1; i >= 0; --i) {
            c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(v % n);
            v /= n;
        }
        return c;
    }

    VertexIndex index_of(std::span<const std::int64_t> coords) const {
        if (coords.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("coordinate count does not match dimension");
        VertexIndex v = 0;
        for (int i = 0; i < dim_; ++i) {
            const std::int64_t c = coords[static_cast<std::size_t>(i)];
            if (c < 0 || c >= side_)
                throw std::invalid_argument("coordinate out of [0, n-1]");
            v = v * static_cast<std::uint64_t>(side_) + static_cast<std::uint64_t>(c);
        }
        return v;
    }

    VertexIndex index_of(std::initializer_list<std::int64_t> coords) const {
        return index_of(std::span<const std::int64_t>(coords.begin(), coords.size()));
    }

    bool contains(VertexIndex v) const { return v < vertex_count_; }

    bool operator==(const TorusSpec& o) const { return dim_ == o.dim_ && side_ == o.side_; }

private:
    int dim_;
    std::int64_t side_;
    std::uint64_t vertex_count_;
};

/// L1 distance with wrap-around: sum over axes of min(|a_i-b_i|, n-|a_i-b_i|).
inline std::int64_t l1_torus_distance(VertexIndex a, VertexIndex b, const TorusSpec& spec) {
    if (!spec.contains(a) || !spec.contains(b))
        throw std::invalid_argument("vertex index out of range");
    const auto n = static_cast<std::uint64_t>(spec.side());
    std::int64_t dist = 0;
    for (int i = 0; i < spec.dim(); ++i) {
        const auto ca = static_cast<std::int64_t>(a % n);
        const auto cb = static_cast<std::int64_t>(b % n);
        a /= n;
        b /= n;
        const std::int64_t diff = ca >= cb ? ca - cb : cb - ca;
        dist += std::min(diff, spec.side() - diff);
    }
    return dist;
}

/// Exact number of integer points x in Z^d with ||x||_1 <= r, via the
/// recurrence V(d, r) = V(d-1, r) + 2 * sum_{j=1..r} V(d-1, r-j), V(1, r) = 2r+1.
/// Throws std::overflow_error if the count does not fit 64 bits.
inline std::uint64_t ball_volume_zd(int d, std::int64_t r) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (r < 0) throw std::invalid_argument("radius must be >= 0");
    const auto rr = static_cast<std::size_t>(r);
    // dp[t] = one-dimensional volume at radius t, then fold in one axis at a time.
    std::vector<std::uint64_t> dp(rr + 1);
    for (std::size_t t = 0; t <= rr; ++t) dp[t] = 2 * static_cast<std::uint64_t>(t) + 1;
    for (int axis = 2; axis <= d; ++axis) {
        std::vector<std::uint64_t> next(rr + 1);
        for (std::size_t t = 0; t <= rr; ++t) {
            std::uint64_t acc = dp[t]; // j = 0 term
            for (std::size_t j = 1; j <= t; ++j)
                acc = detail::checked_add_u64(acc, detail::checked_mul_u64(2, dp[t - j]));
            next[t] = acc;
        }
        dp = std::move(next);
    }
    return dp[rr];
}

/// Number of torus vertices at torus distance exactly t from a fixed vertex,
/// for every t in [0, r_max], computed by folding the per-axis wrapped-distance
/// histogram one axis at a time with prefix sums (O(d * r_max)).
inline std::vector<std::uint64_t> sphere_sizes_torus(const TorusSpec& spec, std::int64_t r_max) {
    if (r_max < 0) throw std::invalid_argument("radius must be >= 0");
    const std::int64_t n = spec.side();
    const auto rr = static_cast<std::size_t>(r_max);
    // Per-axis wrapped distance takes value 0 once, each of 1..h twice with
    // h = ceil(n/2)-1, and n/2 once more when n is even.
    const std::int64_t h = (n + 1) / 2 - 1;
    const bool even = (n % 2 == 0);
    std::vector<std::uint64_t> dp(rr + 1, 0);
    dp[0] = 1;
    for (int axis = 0; axis < spec.dim(); ++axis) {
        std::vector<std::uint64_t> prefix(rr + 2, 0);
        for (std::size_t t = 0; t <= rr; ++t)
            prefix[t + 1] = detail::checked_add_u64(prefix[t], dp[t]);
        std::vector<std::uint64_t> next(rr + 1, 0);
        for (std::size_t t = 0; t <= rr; ++t) {
            std::uint64_t acc = dp[t];
            if (h > 0 && t >= 1) {
                // 2 * sum_{j=1..min(h,t)} dp[t-j]
                const std::size_t lo = t >= static_cast<std::size_t>(h) ? t - static_cast<std::size_t>(h) : 0;
                const std::uint64_t window = prefix[t] - prefix[lo];
                acc = detail::checked_add_u64(acc, detail::checked_mul_u64(2, window));
            }
            if (even && t >= static_cast<std::size_t>(n / 2))
                acc = detail::checked_add_u64(acc, dp[t - static_cast<std::size_t>(n / 2)]);
            next[t] = acc;
        }
        dp = std::move(next);
    }
    return dp;
}

/// Exact cardinality of the closed L1 ball of radius r in the torus.
/// Equals ball_volume_zd(d, r) for r < n/2 (no boundary effects) and n^d once
/// r reaches the torus diameter d*floor(n/2).
inline std::uint64_t ball_volume_torus(const TorusSpec& spec, std::int64_t r) {
    if (r < 0) throw std::invalid_argument("radius must be >= 0");
    const std::int64_t diameter = static_cast<std::int64_t>(spec.dim()) * (spec.side() / 2);
    if (r >= diameter) return spec.vertex_count();
    const std::vector<std::uint64_t> shells = sphere_sizes_torus(spec, r);
    std::uint64_t total = 0;
    for (std::uint64_t s : shells) total = detail::checked_add_u64(total, s);
    return total;
}

/// Calls fn(w) for every vertex w at torus distance exactly 1 from v.
/// For n = 2 the same neighbor may be visited twice (harmless for mask-based
/// breadth-first expansion); neighbors() below de-duplicates.
template <typename Fn>
inline void for_each_neighbor(VertexIndex v, const TorusSpec& spec, Fn&& fn) {
    const auto n = static_cast<std::uint64_t>(spec.side());
    if (n == 1) return;
    std::uint64_t stride = 1;
    VertexIndex rest = v;
    for (int i = spec.dim() - 1; i >= 0; --i) {
        const std::uint64_t c = rest % n;
        rest /= n;
        const std::uint64_t up = (c + 1 == n) ? 0 : c + 1;
        const std::uint64_t down = (c == 0) ? n - 1 : c - 1;
        fn(v + (up - c) * stride);
        fn(v + (down - c) * stride);
        stride *= n;
    }
}

/// The de-duplicated set of vertices at torus distance 1 from v
/// (2d vertices for n >= 3, fewer for n in {1, 2}).
inline std::vector<VertexIndex> neighbors(VertexIndex v, const TorusSpec& spec) {
    if (!spec.contains(v)) throw std::invalid_argument("vertex index out of range");
    std::vector<VertexIndex> out;
    out.reserve(static_cast<std::size_t>(2 * spec.dim()));
    for_each_neighbor(v, spec, [&](VertexIndex w) {
        for (VertexIndex seen : out)
            if (seen == w) return;
        out.push_back(w);
    });
    return out;
}

} // namespace torusburn
