#pragma once

#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "udw/core_types.hpp"

namespace udw::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_validity = 3;
inline constexpr int exit_numerical = 4;

inline constexpr int config_schema = 1;
inline constexpr int csv_schema = 1;

struct ScenarioConfig {
  Params params;
  std::string initial_state = "ground";  // preset name, or "custom"
  std::optional<Mat4c> custom_state;
  std::vector<SolverTag> solvers{SolverTag::markov};
  double g2atau_max = 20.0;
  std::size_t samples = 401;
  bool negativity = false;
  bool enforce_validity = false;
  double validity_threshold = 0.1;
  std::string out_dir = ".";
  std::string prefix = "run";

  void validate() const;
  DensityMatrix4 initial() const;
  std::vector<double> taus() const;
};

bool operator==(const ScenarioConfig& l, const ScenarioConfig& r);

nlohmann::ordered_json to_json(const ScenarioConfig& c);
ScenarioConfig config_from_json(const nlohmann::json& j);

// Header columns of the time-series CSV (after the "# schema=1" line).
std::vector<std::string> csv_columns(bool negativity);

// Entry point shared by the executable and the tests; returns the exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace udw::cli
