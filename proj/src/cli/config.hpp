#pragma once

#include "gausep/gravity.hpp"
#include "gausep/dynamics.hpp"
#include "gausep/model_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gausep::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  std::vector<std::string> paths;  // dotted paths into the model object, all set to the same value
  double min = 0;
  double max = 0;
  int points = 2;
  bool log_scale = false;

  std::string name() const;
  std::vector<double> values() const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::vector<std::string> outputs;  // margin, satisfied, nu_tilde_minus, log_negativity, feasibility
};

struct Damping {
  std::optional<double> ohmic_c2;
  double d_aa = 0, d_ab = 0, d_ba = 0, d_bb = 0;
};

// Top-level file: either a bare model object, or
// { "model": {...} | "scenario": {...}, "omega_rad_per_s": w,
//   "initial_state": "vacuum" | {"V0": [[...]]},
//   "t": .., "steps": .., "damping": {...}, "sweep": {...} }
struct RunConfig {
  json model_json;
  SystemModel model;
  Mat V0;
  std::optional<double> t;
  std::optional<int> steps;
  std::optional<gravity::PhysicalScenario> scenario;
  std::optional<gravity::UnitRecord> units;
  std::optional<Damping> damping;
  std::optional<SweepSpec> sweep;
};

json parse_json_text(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const json& j);

// Copy of the model object with every path set to value.
SystemModel model_with(const json& model_json, const std::vector<std::string>& paths, double value);
SystemModel model_with(const json& model_json, const std::vector<std::pair<std::vector<std::string>, double>>& sets);

}  // namespace gausep::cli
