#pragma once

// The burning-process engine. One step takes the burned set B_k to
// (one-layer dilation of B_k) union {new ignition}, so after k steps driven
// by ignitions x_1..x_k the burned set equals the union of closed balls
// B(x_i, k-i). Also: a naive union-of-balls oracle, an exact burning-number
// search for tiny instances, and the deterministic volume/covering bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "torusburn/errors.hpp"
#include "torusburn/torus.hpp"

namespace torusburn {

/// Evolving burned set with the newly-burned frontier and an O(1)-sampleable
/// unburned index (position-tracked swap-remove array).
class BurnState {
public:
    explicit BurnState(const TorusSpec& spec)
        : spec_(spec),
          burned_(spec.vertex_count(), 0),
          burn_time_(spec.vertex_count(), 0),
          unburned_(spec.vertex_count()),
          position_(spec.vertex_count()) {
        for (std::uint64_t v = 0; v < spec.vertex_count(); ++v) {
            unburned_[v] = v;
            position_[v] = v;
        }
    }

    const TorusSpec& spec() const { return spec_; }
    std::uint32_t step_count() const { return step_; }
    std::uint64_t unburned_count() const { return unburned_.size(); }
    std::uint64_t burned_count() const { return spec_.vertex_count() - unburned_.size(); }
    bool complete() const { return unburned_.empty(); }
    bool is_burned(VertexIndex v) const { return burned_[v] != 0; }
    const std::vector<std::uint8_t>& burned_mask() const { return burned_; }
    const std::vector<VertexIndex>& frontier() const { return frontier_; }

    /// Step k at which v first became burned, or 0 if still unburned.
    std::uint32_t burn_time(VertexIndex v) const { return burn_time_[v]; }
    const std::vector<std::uint32_t>& burn_times() const { return burn_time_; }

    /// The pos-th unburned vertex, pos in [0, unburned_count()).
    VertexIndex unburned_at(std::uint64_t pos) const { return unburned_[pos]; }

    /// Advance one step: dilate the burned set by one layer, then add the
    /// ignition (a radius-0 ball). Igniting an already-burned vertex, or
    /// stepping a complete state, changes nothing except the step counter.
    void step(std::optional<VertexIndex> ignition) {
        if (ignition && !spec_.contains(*ignition))
            throw std::invalid_argument("ignition vertex out of range");
        const std::uint32_t now = step_ + 1;
        next_frontier_.clear();
        for (VertexIndex v : frontier_) {
            for_each_neighbor(v, spec_, [&](VertexIndex w) {
                if (!burned_[w]) burn(w, now);
            });
        }
        if (ignition && !burned_[*ignition]) burn(*ignition, now);
        frontier_.swap(next_frontier_);
        step_ = now;
    }

private:
    void burn(VertexIndex v, std::uint32_t now) {
        burned_[v] = 1;
        burn_time_[v] = now;
        next_frontier_.push_back(v);
        // swap-remove from the unburned index
        const std::uint64_t pos = position_[v];
        const VertexIndex last = unburned_.back();
        unburned_[pos] = last;
        position_[last] = pos;
        unburned_.pop_back();
    }

    TorusSpec spec_;
    std::uint32_t step_ = 0;
    std::vector<std::uint8_t> burned_;
    std::vector<std::uint32_t> burn_time_;
    std::vector<VertexIndex> unburned_;
    std::vector<std::uint64_t> position_;
    std::vector<VertexIndex> frontier_;
    std::vector<VertexIndex> next_frontier_;
};

/// Completed (or horizon-truncated) run of a burning process.
struct BurnTrace {
    int dim = 0;
    std::int64_t side = 0;
    std::uint32_t tau = 0;                         ///< first step with full coverage
    std::vector<std::uint64_t> unburned_per_step;  ///< index k = 0..tau
    std::vector<VertexIndex> ignitions;            ///< x_1..x_tau
    std::vector<std::uint32_t> burn_time;          ///< per vertex; empty unless kept
};

/// The union of balls B(x_i, k-i) for i = 1..min(k, #ignitions), evaluated
/// literally by one breadth-first expansion per ball. Slow reference for the
/// incremental engine.
inline std::vector<std::uint8_t> burned_oracle(const std::vector<VertexIndex>& ignitions,
                                               std::uint32_t k, const TorusSpec& spec) {
    std::vector<std::uint8_t> mask(spec.vertex_count(), 0);
    std::vector<std::uint8_t> seen(spec.vertex_count(), 0);
    std::vector<VertexIndex> ring, next_ring;
    const std::size_t balls = std::min<std::size_t>(ignitions.size(), k);
    for (std::size_t i = 0; i < balls; ++i) {
        const std::int64_t radius = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(i) - 1;
        std::fill(seen.begin(), seen.end(), 0);
        ring.clear();
        ring.push_back(ignitions[i]);
        seen[ignitions[i]] = 1;
        mask[ignitions[i]] = 1;
        for (std::int64_t depth = 0; depth < radius; ++depth) {
            next_ring.clear();
            for (VertexIndex v : ring) {
                for_each_neighbor(v, spec, [&](VertexIndex w) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        mask[w] = 1;
                        next_ring.push_back(w);
                    }
                });
            }
            ring.swap(next_ring);
        }
    }
    return mask;
}

/// Volume lower bound: the least k whose cumulative ball volumes reach n^d.
inline std::uint64_t kappa_lower_bound(const TorusSpec& spec) {
    const std::uint64_t target = spec.vertex_count();
    std::int64_t budget = 256;
    const std::int64_t diameter = static_cast<std::int64_t>(spec.dim()) * (spec.side() / 2);
    for (;;) {
        budget = std::min(budget, diameter + 1);
        const std::vector<std::uint64_t> shells = sphere_sizes_torus(spec, budget);
        std::uint64_t ball = 0;       // volume of B(0, j)
        std::uint64_t cumulative = 0; // sum_{i<=j} #B(0, i)
        for (std::int64_t j = 0; j <= budget; ++j) {
            ball += shells[static_cast<std::size_t>(j)];
            cumulative = detail::checked_add_u64(cumulative, ball);
            if (cumulative >= target) return static_cast<std::uint64_t>(j) + 1;
        }
        if (budget >= diameter + 1) {
            // every ball is the whole torus from here on
            std::uint64_t k = static_cast<std::uint64_t>(budget) + 1;
            while (cumulative < target) {
                cumulative = detail::checked_add_u64(cumulative, target);
                ++k;
            }
            return k;
        }
        budget *= 2;
    }
}

struct GreedyCover {
    std::vector<VertexIndex> centers;
    std::uint64_t bound = 0; ///< #centers + radius
    std::int64_t radius = 0;
};

namespace detail {

/// Visit all torus vertices within L1 distance `radius` of `center`
/// (radius < n/2, so offsets never alias).
template <typename Fn>
inline void for_each_in_ball(const TorusSpec& spec, VertexIndex center, std::int64_t radius, Fn&& fn) {
    const int d = spec.dim();
    const std::int64_t n = spec.side();
    const std::vector<std::int64_t> c = spec.coords_of(center);
    std::vector<std::uint64_t> stride(static_cast<std::size_t>(d));
    std::uint64_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= static_cast<std::uint64_t>(n);
    }
    auto rec = [&](auto&& self, int axis, std::int64_t left, VertexIndex base) -> void {
        if (axis == d) {
            fn(base);
            return;
        }
        for (std::int64_t o = -left; o <= left; ++o) {
            std::int64_t coord = c[static_cast<std::size_t>(axis)] + o;
            if (coord < 0) coord += n;
            else if (coord >= n) coord -= n;
            self(self, axis + 1, left - (o < 0 ? -o : o),
                 base + static_cast<std::uint64_t>(coord) * stride[static_cast<std::size_t>(axis)]);
        }
    };
    rec(rec, 0, radius, 0);
}

} // namespace detail

/// Greedy packing-cover: scan vertices in canonical order, accept a vertex as
/// a center iff its torus distance to every accepted center exceeds `radius`.
/// The result is a maximal packing, hence a cover by radius-`radius` balls;
/// the burning bound is #centers + radius.
inline GreedyCover greedy_cover_schedule(const TorusSpec& spec, std::int64_t radius) {
    if (radius < 1 || 2 * radius >= spec.side())
        throw std::invalid_argument("cover radius must satisfy 1 <= radius < n/2");
    if (spec.vertex_count() > (1ull << 31))
        throw ResourceLimitError("greedy cover needs a per-vertex mask; n^d exceeds 2^31");
    GreedyCover out;
    out.radius = radius;
    std::vector<std::uint8_t> blocked(spec.vertex_count(), 0);
    for (VertexIndex v = 0; v < spec.vertex_count(); ++v) {
        if (blocked[v]) continue;
        out.centers.push_back(v);
        detail::for_each_in_ball(spec, v, radius, [&](VertexIndex w) { blocked[w] = 1; });
    }
    out.bound = out.centers.size() + static_cast<std::uint64_t>(radius);
    return out;
}

struct DeterministicBoundConstants {
    double alpha; ///< lower-bound constant ((d+1)!/2^d)^(1/(d+1))
    double gamma; ///< upper-bound constant ((1+1/d)^d (d+1)!)^(1/(d+1))
};

inline DeterministicBoundConstants prop1_constants(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    double fact = 1.0; // (d+1)!
    for (int i = 2; i <= d + 1; ++i) fact *= static_cast<double>(i);
    const double inv = 1.0 / static_cast<double>(d + 1);
    const double alpha = std::pow(fact / std::exp2(static_cast<double>(d)), inv);
    const double gamma = std::pow(std::pow(1.0 + 1.0 / static_cast<double>(d), d) * fact, inv);
    return {alpha, gamma};
}

namespace detail {

/// Depth-first feasibility search: can the torus be fully burned in exactly
/// `target` steps? Masks are 64-bit (guarded n^d <= 40); failures are memoized
/// on (mask, depth).
class ExactBurnSearch {
public:
    ExactBurnSearch(const TorusSpec& spec, std::uint64_t target)
        : spec_(spec), target_(target), vc_(spec.vertex_count()) {
        full_ = (vc_ == 64) ? ~0ull : ((1ull << vc_) - 1);
        neighbor_mask_.resize(vc_);
        for (std::uint64_t v = 0; v < vc_; ++v) {
            std::uint64_t m = 0;
            for (VertexIndex w : neighbors(v, spec))
                m |= 1ull << w;
            neighbor_mask_[v] = m;
        }
        // cumulative ball volumes for the feasibility prune
        ball_volume_.resize(static_cast<std::size_t>(target_) + 1);
        for (std::uint64_t r = 0; r <= target_; ++r)
            ball_volume_[r] = ball_volume_torus(spec, static_cast<std::int64_t>(r));
    }

    bool feasible() {
        failed_.clear();
        // by vertex-transitivity the first ignition can be fixed at the origin
        const std::uint64_t mask1 = 1ull; // burned set after step 1
        if (target_ == 0) return vc_ == 0;
        return dfs(mask1, 1);
    }

private:
    std::uint64_t dilate(std::uint64_t mask) const {
        std::uint64_t out = mask;
        std::uint64_t rest = mask;
        while (rest) {
            const int v = __builtin_ctzll(rest);
            rest &= rest - 1;
            out |= neighbor_mask_[static_cast<std::size_t>(v)];
        }
        return out;
    }

    bool dfs(std::uint64_t mask, std::uint64_t depth) {
        if (depth == target_) return mask == full_;
        // prune: even dilating for all remaining steps and spending every
        // remaining ignition on a fresh maximal ball cannot cover the torus
        const std::uint64_t remaining = target_ - depth;
        std::uint64_t reach = mask;
        for (std::uint64_t s = 0; s < remaining && reach != full_; ++s) reach = dilate(reach);
        std::uint64_t potential = static_cast<std::uint64_t>(__builtin_popcountll(reach));
        for (std::uint64_t j = 1; j <= remaining; ++j)
            potential += ball_volume_[remaining - j];
        if (potential < vc_) return false;

        const std::uint64_t key = (mask << 6) | depth;
        if (failed_.count(key)) return false;

        const std::uint64_t dilated = dilate(mask);
        std::unordered_set<std::uint64_t> tried;
        // candidates producing larger immediate coverage first
        std::vector<std::uint64_t> cands;
        cands.reserve(vc_);
        for (std::uint64_t x = 0; x < vc_; ++x) {
            const std::uint64_t next = dilated | (1ull << x);
            if (tried.insert(next).second) cands.push_back(next);
        }
        std::sort(cands.begin(), cands.end(), [](std::uint64_t a, std::uint64_t b) {
            return __builtin_popcountll(a) > __builtin_popcountll(b);
        });
        for (std::uint64_t next : cands)
            if (dfs(next, depth + 1)) return true;
        failed_.insert(key);
        return false;
    }

    TorusSpec spec_;
    std::uint64_t target_;
    std::uint64_t vc_;
    std::uint64_t full_;
    std::vector<std::uint64_t> neighbor_mask_;
    std::vector<std::uint64_t> ball_volume_;
    std::unordered_set<std::uint64_t> failed_;
};

} // namespace detail

/// Exact burning number b(T_n^d) by depth-first search over ignition
/// sequences. Guarded: refuses instances beyond n^d <= 40 (or d = 1, n <= 25).
inline std::uint64_t exact_burning_number(const TorusSpec& spec) {
    const std::uint64_t vc = spec.vertex_count();
    const bool small_enough = vc <= 40 || (spec.dim() == 1 && spec.side() <= 25);
    if (!small_enough)
        throw ResourceLimitError("exact burning number restricted to n^d <= 40 or d=1, n <= 25");
    if (vc == 1) return 1;

    // upper bound: eccentricity + 1, improved by greedy covers where feasible
    std::uint64_t upper = static_cast<std::uint64_t>(spec.dim()) * (spec.side() / 2) + 1;
    for (std::int64_t radius = 1; 2 * radius < spec.side(); ++radius)
        upper = std::min(upper, greedy_cover_schedule(spec, radius).bound);
    const std::uint64_t lower = kappa_lower_bound(spec);

    for (std::uint64_t target = lower; target < upper; ++target) {
        detail::ExactBurnSearch search(spec, target);
        if (search.feasible()) return target;
    }
    return upper;
}

} // namespace torusburn
