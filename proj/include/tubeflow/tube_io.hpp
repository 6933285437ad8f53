#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tubeflow/dof.hpp"
#include "tubeflow/swarm.hpp"
#include "tubeflow/tube.hpp"

namespace tubeflow {

// JSON tube and scenario files. Parse failures throw std::runtime_error with
// "<origin>:<line>:<column>" context; semantic failures name the offending
// field. Emitted numbers round-trip exactly, so save/load reproduces a tube
// bit for bit.

/// Parses a tube from JSON text. `origin` labels error messages (a file path,
/// usually). An optional "modification" clause is applied before returning;
/// the result is validated.
VirtualTube tube_from_json(const std::string& text, const std::string& origin = "tube");

VirtualTube load_tube(const std::filesystem::path& file);

std::string tube_to_json(const VirtualTube& tube);

void save_tube(const VirtualTube& tube, const std::filesystem::path& file);

/// A tube reference is either a canonical letter (A-E, case-insensitive) or a
/// path to a tube JSON file, resolved against base_dir when relative.
VirtualTube resolve_tube_ref(const std::string& ref,
                             const std::filesystem::path& base_dir = ".");

struct ScenarioFile {
    std::vector<VirtualTube> tubes;
    CampaignOptions options;
};

/// Scenario JSON: {"tubes": [refs...]} or {"tube": ref}, plus optional
/// "robots", "trials", "seed", "dt", "t_max", "record_trajectories",
/// "gains": {...}, "flow": {...}, "quadrature": {...}. Tube file references
/// resolve relative to the scenario file's directory.
ScenarioFile load_scenario(const std::filesystem::path& file);

/// Shortest decimal string that round-trips to the same double. Used for all
/// CSV and JSON emission so outputs are byte-stable.
std::string format_number(double v);

std::string dof_report_to_json(const DofReport& report);

/// Header line plus one data row:
/// tube,energy_j,average_width_m,dof_m_per_j,n_s,n_lambda,resistance,cross_speed,total_mass
std::string dof_report_to_csv(const DofReport& report);

} // namespace tubeflow
