#pragma once

// Counter-based randomness table: a pure function (seed, i, h) -> uniform
// vertex, so the infinite array of per-step attempt variables never needs
// storing and any entry can be revisited (the coupled processes re-read the
// same entries at every level).

#include <cstdint>

#include "torusburn/torus.hpp"

namespace torusburn {

namespace detail {

/// splitmix64 finalizer; a bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Unbiased uniform draw in [0, bound) from the counter stream key, key+1, ...
/// (Lemire multiply-shift with rejection of the short top interval).
inline std::uint64_t uniform_below(std::uint64_t key, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (std::uint64_t t = 0;; ++t) {
        const std::uint64_t x = mix64(key + t * 0xD1B54A32D192ED03ull);
        const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        if (static_cast<std::uint64_t>(m) >= threshold)
            return static_cast<std::uint64_t>(m >> 64);
    }
}

} // namespace detail

/// Deterministic table of independent uniform draws indexed by
/// (step index i >= 1, attempt index h >= 1).
class RandomnessTable {
public:
    RandomnessTable(std::uint64_t seed, const TorusSpec& spec)
        : seed_key_(detail::mix64(seed ^ 0x6A09E667F3BCC908ull)),
          vertex_count_(spec.vertex_count()) {}

    /// The table entry X_i^h: a uniform vertex of the torus.
    VertexIndex vertex(std::uint64_t step_index, std::uint64_t attempt) const {
        return detail::uniform_below(entry_key(step_index, attempt), vertex_count_);
    }

    /// A uniform draw in [0, bound) from entry (i, h)'s stream; used to pick a
    /// position in the unburned index without walking the table.
    std::uint64_t below(std::uint64_t step_index, std::uint64_t attempt, std::uint64_t bound) const {
        return detail::uniform_below(entry_key(step_index, attempt), bound);
    }

    std::uint64_t vertex_count() const { return vertex_count_; }

private:
    std::uint64_t entry_key(std::uint64_t i, std::uint64_t h) const {
        std::uint64_t k = detail::mix64(seed_key_ ^ (i * 0x9E3779B97F4A7C15ull));
        return detail::mix64(k ^ (h * 0xBF58476D1CE4E5B9ull));
    }

    std::uint64_t seed_key_;
    std::uint64_t vertex_count_;
};

} // namespace torusburn
