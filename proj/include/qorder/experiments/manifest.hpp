#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qorder/accuracy.hpp"

#ifndef QORDER_VERSION
#define QORDER_VERSION "unknown"
#endif

namespace qorder::experiments
{

inline constexpr char const* manifest_schema = "qorder.manifest.v1";

/*!
 * Run record written next to the outputs. Only `timestamp` and
 * `wall_time_s` vary between identical runs.
 */
struct Manifest
{
    std::string subcommand;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;
    double wall_time_s = 0;
    bool partial = false;
    std::string error;

    nlohmann::ordered_json to_json() const
    {
        EvalAccuracy const acc;
        nlohmann::ordered_json j;
        j["schema"] = manifest_schema;
        j["software"] = {{"name", "qorder"}, {"version", QORDER_VERSION}};
        j["subcommand"] = subcommand;
        j["config"] = config;
        j["tolerances"] = {{"special_function_abs", acc.abs_tol},
                           {"special_function_rel", acc.rel_tol},
                           {"norm_drift_flag", 1e-4},
                           {"boundary_probability_flag", 1e-6},
                           {"dk_over_k_flag", 0.1}};
        j["outputs"] = outputs;
        j["partial"] = partial;
        if (!error.empty())
        {
            j["error"] = error;
        }
        j["timestamp"] = utc_timestamp();
        j["wall_time_s"] = wall_time_s;
        return j;
    }

    static std::string utc_timestamp()
    {
        auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
};

inline void write_manifest(std::string const& path, Manifest const& m)
{
    std::ofstream os(path);
    if (!os)
    {
        throw std::runtime_error("cannot write manifest '" + path + "'");
    }
    os << m.to_json().dump(2) << '\n';
}

}  // namespace qorder::experiments
