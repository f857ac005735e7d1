#pragma once
#include "prophetlab/instance.hpp"

#include <json.hpp>

#include <string>

namespace prophetlab {

inline constexpr const char* kVersion = "prophetlab 0.1.0";

// Instance schema:
//   {"variables":[{"atoms":[[value,mass],...],"label":"..."},
//                 {"uniform":[a,b]}, {"exponential":[rate]}, ...]}
// Parametric kinds are discretized on load (midpoint quantile grid).
Instance parse_instance_json(const nlohmann::json& doc,
                             int param_grid = Distribution::kDefaultQuantileGrid);
Instance parse_instance_text(const std::string& text,
                             int param_grid = Distribution::kDefaultQuantileGrid);
Instance parse_instance_file(const std::string& path,
                             int param_grid = Distribution::kDefaultQuantileGrid);

nlohmann::json instance_to_json(const Instance& inst);
void write_instance(const Instance& inst, const std::string& path);

/// Self-describing result record.  Reports echo every input including seeds,
/// so a report can be reproduced byte-for-byte from its own inputs block.
struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> flags;
};

// Canonical serialization: keys sorted, doubles printed with 12 significant
// digits, so identical reports are byte-identical and diff cleanly.
std::string canonical_json(const nlohmann::json& doc);

std::string report_to_string(const Report& report);
void emit_report(const Report& report, const std::string& path); // "" -> stdout

// CLI front end; returns the process exit code.
int dispatch(int argc, const char* const* argv);

} // namespace prophetlab
