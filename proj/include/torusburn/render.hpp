#pragma once

// Burn-time heatmap rendering for d=2 traces: one pixel per vertex
// (row-major), burn time mapped through a red-to-purple hue ramp, unburned
// vertices black. Output is binary PPM (P6): dependency-free and bit-exact
// testable; `magick burn.ppm burn.png` converts if needed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "torusburn/burn.hpp"

namespace torusburn {

/// Hue angle in degrees for a burn time in [1, max_time]: 0 (red) for the
/// first step, increasing monotonically to 280 (purple) for the last.
inline double burn_hue_degrees(std::uint32_t burn_time, std::uint32_t max_time) {
    if (burn_time < 1) throw std::invalid_argument("burn time must be >= 1");
    if (max_time <= 1) return 0.0;
    return 280.0 * static_cast<double>(burn_time - 1) / static_cast<double>(max_time - 1);
}

/// Full-saturation, full-value HSV to RGB.
inline std::array<std::uint8_t, 3> hue_to_rgb(double hue_degrees) {
    const double h = std::fmod(std::max(hue_degrees, 0.0), 360.0) / 60.0;
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    const auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(255.0 * x)); };
    switch (sector) {
        case 0: return {255, byte(f), 0};
        case 1: return {byte(1 - f), 255, 0};
        case 2: return {0, 255, byte(f)};
        case 3: return {0, byte(1 - f), 255};
        case 4: return {byte(f), 0, 255};
        default: return {255, 0, byte(1 - f)};
    }
}

/// Renders a d=2 trace with a burn_time field to binary PPM bytes.
inline std::vector<std::uint8_t> render_burn_heatmap(const BurnTrace& trace) {
    if (trace.dim != 2) throw std::invalid_argument("heatmap rendering needs a d=2 trace");
    if (trace.burn_time.empty())
        throw std::invalid_argument("trace has no burn_time field; rerun with burn times kept");
    const auto n = static_cast<std::size_t>(trace.side);
    if (trace.burn_time.size() != n * n)
        throw std::invalid_argument("burn_time size does not match n^2");
    std::uint32_t max_time = 1;
    for (std::uint32_t t : trace.burn_time) max_time = std::max(max_time, t);

    std::string header = "P6\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + 3 * n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        const std::uint32_t bt = trace.burn_time[i];
        std::array<std::uint8_t, 3> rgb{0, 0, 0}; // unburned stays black
        if (bt > 0) rgb = hue_to_rgb(burn_hue_degrees(bt, max_time));
        out.insert(out.end(), rgb.begin(), rgb.end());
    }
    return out;
}

inline void write_ppm(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace torusburn
