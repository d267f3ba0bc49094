#pragma once

// JSON persistence for burn traces. One document per run; integer-only
// payload, alphabetically ordered keys, so identical configs produce
// byte-identical files.

#include <fstream>
#include <string>

#include <json.hpp>

#include "torusburn/burn.hpp"

namespace torusburn {

struct TraceFile {
    std::string process; ///< "cc" | "rs" | "literal-rs"
    std::uint64_t seed = 0;
    BurnTrace trace;
};

inline nlohmann::json trace_to_json(const TraceFile& tf) {
    nlohmann::json j;
    j["d"] = tf.trace.dim;
    j["n"] = tf.trace.side;
    j["process"] = tf.process;
    j["seed"] = tf.seed;
    j["tau"] = tf.trace.tau;
    j["unburned_per_step"] = tf.trace.unburned_per_step;
    j["ignitions"] = tf.trace.ignitions;
    if (!tf.trace.burn_time.empty()) j["burn_time"] = tf.trace.burn_time;
    return j;
}

inline TraceFile trace_from_json(const nlohmann::json& j) {
    TraceFile tf;
    tf.process = j.at("process").get<std::string>();
    tf.seed = j.at("seed").get<std::uint64_t>();
    tf.trace.dim = j.at("d").get<int>();
    tf.trace.side = j.at("n").get<std::int64_t>();
    tf.trace.tau = j.at("tau").get<std::uint32_t>();
    tf.trace.unburned_per_step = j.at("unburned_per_step").get<std::vector<std::uint64_t>>();
    tf.trace.ignitions = j.at("ignitions").get<std::vector<VertexIndex>>();
    if (j.contains("burn_time"))
        tf.trace.burn_time = j.at("burn_time").get<std::vector<std::uint32_t>>();
    return tf;
}

inline void write_trace(const TraceFile& tf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << trace_to_json(tf).dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline TraceFile read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    return trace_from_json(j);
}

} // namespace torusburn
