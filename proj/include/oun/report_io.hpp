#pragma once

#include <filesystem>
#include <fstream>

#include "oun/config.hpp"
#include "oun/verify.hpp"

namespace oun {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
}

inline nlohmann::json check_to_json(const CheckResult& r) {
    nlohmann::json j{{"name", r.name},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"residual_or_slack", r.residual_or_slack},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}};
    if (!r.extra.empty()) j["extra"] = r.extra;
    return j;
}

inline nlohmann::json battery_to_json(const BatteryReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& r : rep.results) checks.push_back(check_to_json(r));
    return nlohmann::json{{"checks", checks},
                          {"manifest_hash", rep.manifest_hash},
                          {"all_pass", rep.all_pass},
                          {"max_drift_ratio", rep.max_drift_ratio}};
}

/// checks.csv: one row per check, floats at 17 significant digits.
inline std::string battery_to_csv(const BatteryReport& rep, const std::string& cfg_hash) {
    std::string s;
    s += "# ouneumann " + std::string(kVersion) + " config=" + cfg_hash +
         " manifest=" + rep.manifest_hash + "\n";
    s += "name,lhs,rhs,residual_or_slack,tolerance,pass\n";
    for (const CheckResult& r : rep.results)
        s += r.name + "," + fmt17(r.lhs) + "," + fmt17(r.rhs) + "," + fmt17(r.residual_or_slack) +
             "," + fmt17(r.tolerance) + "," + (r.pass ? "1" : "0") + "\n";
    return s;
}

/// sweep.csv: one row per ambient dimension.
inline std::string sweep_to_csv(const std::vector<SweepEntry>& entries,
                                const std::string& cfg_hash) {
    std::string s;
    s += "# ouneumann " + std::string(kVersion) + " config=" + cfg_hash + "\n";
    s += "n,lambda,r1,r2,r3,w22_ratio,cg_iterations,wall_time_ms\n";
    for (const SweepEntry& e : entries)
        s += std::to_string(e.n) + "," + fmt17(e.lambda) + "," + fmt17(e.r1) + "," + fmt17(e.r2) +
             "," + fmt17(e.r3) + "," + fmt17(e.w22_ratio) + "," + std::to_string(e.cg_iterations) +
             "," + fmt17(e.wall_time_ms) + "\n";
    return s;
}

inline nlohmann::json sweep_to_json(const std::vector<SweepEntry>& entries) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepEntry& e : entries)
        rows.push_back(nlohmann::json{{"n", e.n},
                                      {"lambda", e.lambda},
                                      {"r1", e.r1},
                                      {"r2", e.r2},
                                      {"r3", e.r3},
                                      {"w22_ratio", e.w22_ratio},
                                      {"cg_iterations", e.cg_iterations},
                                      {"wall_time_ms", e.wall_time_ms}});
    return rows;
}

inline nlohmann::json solve_report_to_json(const SolveReport& r) {
    return nlohmann::json{{"lambda", r.lambda},
                          {"l2_u", r.l2_u},
                          {"l2_grad", r.l2_grad},
                          {"hs_hess", r.hs_hess},
                          {"l2_f", r.l2_f},
                          {"drift_norm", r.drift_norm},
                          {"flux_norm", r.flux_norm},
                          {"cg_iterations", r.cg_iterations},
                          {"cg_residual", r.cg_residual},
                          {"r1", r.r1},
                          {"r2", r.r2},
                          {"r3", r.r3},
                          {"w22_ratio", r.w22_ratio}};
}

inline nlohmann::json mc_to_json(const McEstimate& e) {
    return nlohmann::json{{"value", e.value},
                          {"std_error", e.std_error},
                          {"n_paths", e.n_paths},
                          {"dt", e.dt},
                          {"t_max", e.t_max}};
}

/// Wraps a payload with the config hash and library version; every artifact
/// carries both.
inline nlohmann::json artifact(const ExperimentConfig& cfg, nlohmann::json payload) {
    payload["version"] = kVersion;
    payload["config_hash"] = config_hash(cfg);
    return payload;
}

}  // namespace oun
