#pragma once

// Verification reports: one named check, its sample budget and seed, the
// observed ratio envelope, fitted constants, and the pass verdict.

#include <cstdint>
#include <map>
#include <string>

#include "carnot/serialize.hpp"

namespace carnot {

struct VerificationReport {
    std::string check;
    Json params = Json::object();
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    std::map<std::string, double> fitted;
    double threshold = 0.0;
    bool pass = false;
    std::int64_t runtime_ms = 0;

    /// Timing is suppressed by default so that fixed (config, seed) runs
    /// produce byte-identical JSON.
    Json to_json(bool emit_runtime = false) const {
        Json j;
        j["check"] = check;
        j["params"] = params;
        j["seed"] = seed;
        j["samples"] = samples;
        j["ratio_min"] = ratio_min;
        j["ratio_max"] = ratio_max;
        Json f = Json::object();
        for (const auto& [k, v] : fitted) f[k] = v;
        j["fitted"] = f;
        j["threshold"] = threshold;
        j["pass"] = pass;
        j["runtime_ms"] = emit_runtime ? runtime_ms : 0;
        return j;
    }
};

/// Track an envelope of observed ratios.
struct RatioEnvelope {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double r) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    bool within(double band_lo, double band_hi) const { return lo >= band_lo && hi <= band_hi; }
};

}  // namespace carnot
