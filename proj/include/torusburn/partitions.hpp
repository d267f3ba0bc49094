#pragma once

// Nested dyadic box partitions of the torus. A box with side lengths in
// [2^l, 2^(l+1)] splits per axis into a ceil-half and a floor-half interval,
// both with lengths in [2^(l-1), 2^l]; recursing from [0, n-1]^d keeps every
// depth-k side length inside [2^(m-k), 2^(m-k+1)] with m = floor(log2 n).
// The leveled cell collection exposes generations h+1 .. h+ell of that tree,
// with
//     h   = floor(log2( n^(1/(d+1)) / (2*epsilon) )),
//     ell = floor( (2/3) * log2( epsilon * n^(d/(d+1)) ) ),
//     r_k = epsilon * n^(d/(d+1)) * 2^(-k),
// and satisfies, with C = 8^d: cells at level k partition the torus, nest in
// level k-1, have L1 diameter at most C*r_k and cardinality in
// [r_k^d, C*r_k^d].
//
// Boxes never wrap, so cells are the boxes themselves and the torus diameter
// of a cell equals its box diameter sum(side_i - 1); it is computed that way
// (O(d)) instead of by pairwise scan. Cells are kept as per-axis interval
// tables per level (every axis splits identically), never as vertex lists.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "torusburn/errors.hpp"
#include "torusburn/torus.hpp"

namespace torusburn {

/// One node of the dyadic splitting tree (materialized form, for small n).
struct BoxNode {
    std::vector<std::pair<std::int64_t, std::int64_t>> bounds; ///< per-axis [a, b]
    int depth = 0;
    std::vector<BoxNode> children;
};

namespace detail {

inline std::pair<std::int64_t, std::int64_t> split_interval_low(std::int64_t a, std::int64_t b) {
    const std::int64_t len = b - a + 1;
    return {a, a + (len + 1) / 2 - 1};
}

inline std::pair<std::int64_t, std::int64_t> split_interval_high(std::int64_t a, std::int64_t b) {
    const std::int64_t len = b - a + 1;
    return {a + (len + 1) / 2, b};
}

inline void split_box(BoxNode& node, int max_depth) {
    if (node.depth >= max_depth) return;
    const int d = static_cast<int>(node.bounds.size());
    const int fan = 1 << d;
    node.children.reserve(static_cast<std::size_t>(fan));
    for (int pick = 0; pick < fan; ++pick) {
        BoxNode child;
        child.depth = node.depth + 1;
        child.bounds.resize(static_cast<std::size_t>(d));
        bool empty = false;
        for (int i = 0; i < d; ++i) {
            const auto [a, b] = node.bounds[static_cast<std::size_t>(i)];
            const auto part = (pick >> i) & 1 ? split_interval_high(a, b) : split_interval_low(a, b);
            if (part.second < part.first) empty = true;
            child.bounds[static_cast<std::size_t>(i)] = part;
        }
        if (empty) continue; // length-1 intervals stop splitting on that axis combination
        split_box(child, max_depth);
        node.children.push_back(std::move(child));
    }
}

/// floor(log2(x)) for x >= 1 (exact integer arithmetic).
inline int floor_log2_u64(std::uint64_t x) {
    int l = -1;
    while (x) {
        x >>= 1;
        ++l;
    }
    return l;
}

/// Is 2*epsilon an exact power of two? Returns the exponent via out.
inline bool two_epsilon_exponent(double epsilon, int& out) {
    int exp = 0;
    const double mant = std::frexp(2.0 * epsilon, &exp);
    if (mant == 0.5) {
        out = exp - 1;
        return true;
    }
    return false;
}

} // namespace detail

/// Root box [0, n-1]^d recursively split to depth m = floor(log2 n).
inline BoxNode build_dyadic_tree(const TorusSpec& spec) {
    if (spec.side() < 2) throw std::invalid_argument("dyadic tree needs n >= 2");
    const int m = detail::floor_log2_u64(static_cast<std::uint64_t>(spec.side()));
    // the materialized tree has ~2^(d m) leaves; refuse instead of thrashing
    if (static_cast<std::uint64_t>(m) * spec.dim() > 24)
        throw ResourceLimitError("materialized dyadic tree limited to n^d <= 2^24; "
                                 "the leveled partition view handles large instances");
    BoxNode root;
    root.depth = 0;
    root.bounds.assign(static_cast<std::size_t>(spec.dim()), {0, spec.side() - 1});
    detail::split_box(root, m);
    return root;
}

/// Leveled cell collection: levels 1..ell hold the boxes of tree generations
/// h+1..h+ell. Since every axis splits identically, a level is stored as one
/// per-axis interval table; the cells are the d-fold products.
struct NestedPartition {
    TorusSpec spec;
    double epsilon = 0.0;
    int h = 0;
    int ell = 0;
    int m = 0;
    std::vector<double> radii; ///< radii[k-1] = r_k for k = 1..ell
    /// axis_intervals[k-1] = the per-axis intervals at tree generation h+k
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> axis_intervals;

    std::uint64_t cells_at_level(int k) const {
        std::uint64_t c = 1;
        for (int i = 0; i < spec.dim(); ++i)
            c *= axis_intervals[static_cast<std::size_t>(k - 1)].size();
        return c;
    }
};

/// Builds the leveled partition; throws std::domain_error naming the failing
/// regime inequality when n is too small for the requested epsilon.
inline NestedPartition build_nested_partition(const TorusSpec& spec, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (spec.side() < 2) throw std::invalid_argument("partition needs n >= 2");
    const double n = static_cast<double>(spec.side());
    const int d = spec.dim();
    const int m = detail::floor_log2_u64(static_cast<std::uint64_t>(spec.side()));

    // h = floor(log2(n^(1/(d+1)) / (2 eps))), ell = floor((2/3) log2(eps n^(d/(d+1)))).
    // When 2*eps is a power of two both reduce to exact integer comparisons;
    // otherwise fall back to double log2.
    int h = 0, ell = 0;
    int s = 0;
    const bool exact = detail::two_epsilon_exponent(epsilon, s) &&
                       2 * d * (detail::floor_log2_u64(static_cast<std::uint64_t>(spec.side())) + 1) <= 126;
    if (exact) {
        // 2^(h+s) <= n^(1/(d+1))  <=>  2^((h+s)(d+1)) <= n
        h = -s;
        while (true) {
            const int e = (h + 1 + s) * (d + 1);
            if (e > 62) break;
            if ((1ull << e) <= static_cast<std::uint64_t>(spec.side())) ++h;
            else break;
        }
        // 2^(3t) <= (eps n^(d/(d+1)))^2 = 2^(2(s-1)) n^(2d/(d+1))
        //   <=>  2^((3t-2s+2)(d+1)) <= n^(2d)
        unsigned __int128 rhs = 1;
        for (int i = 0; i < 2 * d; ++i) rhs *= static_cast<unsigned __int128>(spec.side());
        ell = 0;
        while (true) {
            const int e = (3 * (ell + 1) - 2 * (s - 1)) * (d + 1);
            if (e < 0) { ++ell; continue; } // 2^e < 1 <= rhs
            if (e > 126) break;
            const unsigned __int128 lhs = static_cast<unsigned __int128>(1) << e;
            if (lhs <= rhs) ++ell;
            else break;
        }
    } else {
        const double root = std::pow(n, 1.0 / (d + 1));
        h = static_cast<int>(std::floor(std::log2(root / (2.0 * epsilon))));
        ell = static_cast<int>(std::floor(2.0 / 3.0 * std::log2(epsilon * std::pow(n, static_cast<double>(d) / (d + 1)))));
    }

    if (h < 0)
        throw std::domain_error("regime violated: h = floor(log2(n^(1/(d+1))/(2 eps))) = " +
                                std::to_string(h) + " < 0 (n too small for this epsilon)");
    if (ell < 1)
        throw std::domain_error("regime violated: ell = floor((2/3) log2(eps n^(d/(d+1)))) = " +
                                std::to_string(ell) + " < 1 (n too small for this epsilon)");
    if (h + ell > m)
        throw std::domain_error("regime violated: h + ell = " + std::to_string(h + ell) +
                                " > m = floor(log2 n) = " + std::to_string(m));

    NestedPartition part{spec, epsilon, h, ell, m, {}, {}};
    const double scale = epsilon * std::pow(n, static_cast<double>(d) / (d + 1));
    for (int k = 1; k <= ell; ++k) part.radii.push_back(scale * std::exp2(-k));

    // per-axis intervals of generation g, derived by splitting g times
    std::vector<std::pair<std::int64_t, std::int64_t>> intervals{{0, spec.side() - 1}};
    for (int g = 1; g <= h + ell; ++g) {
        std::vector<std::pair<std::int64_t, std::int64_t>> next;
        next.reserve(intervals.size() * 2);
        for (const auto& [a, b] : intervals) {
            const auto lo = detail::split_interval_low(a, b);
            const auto hi = detail::split_interval_high(a, b);
            next.push_back(lo);
            if (hi.second >= hi.first) next.push_back(hi);
        }
        intervals = std::move(next);
        if (g > h) part.axis_intervals.push_back(intervals);
    }
    return part;
}

/// Violation report of verify_partition. Clean iff violations is empty.
struct PartitionReport {
    double max_diameter_ratio = 0.0;     ///< max over cells of diameter / r_k
    double min_cardinality_ratio = 1e300; ///< min over cells of #cell / r_k^d
    double max_cardinality_ratio = 0.0;  ///< max over cells of #cell / r_k^d
    std::vector<std::string> violations;
};

/// Exhaustively checks, per level: the per-axis intervals tile [0, n-1]
/// (hence the cells partition the torus, with an exact cover count), each
/// child interval nests in exactly one parent interval, the child-count
/// bound, and the diameter/cardinality brackets against C = 8^d. Comparisons
/// carry a 1e-9 relative slack for the floating r_k.
inline PartitionReport verify_partition(const NestedPartition& part) {
    PartitionReport report;
    const int d = part.spec.dim();
    const double C = std::pow(8.0, d);
    const double slack = 1.0 + 1e-9;

    for (int k = 1; k <= part.ell; ++k) {
        const auto& axis = part.axis_intervals[static_cast<std::size_t>(k - 1)];
        const double r = part.radii[static_cast<std::size_t>(k - 1)];

        // per-axis tiling of [0, n-1]
        std::int64_t cursor = 0;
        for (const auto& [a, b] : axis) {
            if (a != cursor || b < a)
                report.violations.push_back("level " + std::to_string(k) + ": axis intervals do not tile at " +
                                            std::to_string(a));
            cursor = b + 1;
        }
        if (cursor != part.spec.side())
            report.violations.push_back("level " + std::to_string(k) + ": axis intervals end at " +
                                        std::to_string(cursor) + " instead of n");
        // exact cover count: cells are products, so sum of cardinalities is
        // (sum of interval lengths)^d = n^d exactly when the tiling holds
        std::uint64_t axis_total = 0;
        std::int64_t min_len = part.spec.side(), max_len = 0;
        for (const auto& [a, b] : axis) {
            const std::int64_t len = b - a + 1;
            axis_total += static_cast<std::uint64_t>(len);
            min_len = std::min(min_len, len);
            max_len = std::max(max_len, len);
        }
        if (axis_total != static_cast<std::uint64_t>(part.spec.side()))
            report.violations.push_back("level " + std::to_string(k) + ": cover count mismatch");

        // nesting: child intervals 2j(,2j+1) must partition parent j
        const auto& parent = k == 1 ? std::vector<std::pair<std::int64_t, std::int64_t>>{}
                                    : part.axis_intervals[static_cast<std::size_t>(k - 2)];
        if (k > 1) {
            if (axis.size() != parent.size() * 2) {
                report.violations.push_back("level " + std::to_string(k) + ": child interval count " +
                                            std::to_string(axis.size()) + " != 2 * parent count");
            } else {
                for (std::size_t j = 0; j < parent.size(); ++j) {
                    const auto& p = parent[j];
                    const auto& c0 = axis[2 * j];
                    const auto& c1 = axis[2 * j + 1];
                    if (c0.first != p.first || c1.second != p.second || c0.second + 1 != c1.first)
                        report.violations.push_back("level " + std::to_string(k) +
                                                    ": child intervals do not partition parent " +
                                                    std::to_string(j));
                }
            }
        }

        // diameter and cardinality brackets; extremes are attained because the
        // cells are all d-fold products of the axis intervals
        const double max_diameter = static_cast<double>(d) * static_cast<double>(max_len - 1);
        const double min_card = std::pow(static_cast<double>(min_len), d);
        const double max_card = std::pow(static_cast<double>(max_len), d);
        const double rd = std::pow(r, d);
        report.max_diameter_ratio = std::max(report.max_diameter_ratio, max_diameter / r);
        report.min_cardinality_ratio = std::min(report.min_cardinality_ratio, min_card / rd);
        report.max_cardinality_ratio = std::max(report.max_cardinality_ratio, max_card / rd);
        if (max_diameter > C * r * slack)
            report.violations.push_back("level " + std::to_string(k) + ": diameter " +
                                        std::to_string(max_diameter) + " exceeds C*r_k");
        if (min_card * slack < rd)
            report.violations.push_back("level " + std::to_string(k) + ": cardinality below r_k^d");
        if (max_card > C * rd * slack)
            report.violations.push_back("level " + std::to_string(k) + ": cardinality above C*r_k^d");

        // child-count bound: cells split into (children per axis)^d pieces,
        // which must stay within C * 2^d
        if (k > 1 && !parent.empty()) {
            const double per_axis = static_cast<double>(axis.size()) / static_cast<double>(parent.size());
            const double children = std::pow(per_axis, d);
            if (children > C * std::exp2(d) * slack)
                report.violations.push_back("level " + std::to_string(k) + ": child count " +
                                            std::to_string(children) + " exceeds C*2^d");
        }
    }
    return report;
}

} // namespace torusburn
