#pragma once

#include "cli/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace gausep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolated = 2;
inline constexpr int kExitInfeasible = 3;

struct Options {
  std::string config;
  std::string out;  // empty: stdout
  std::optional<double> t;
  std::optional<double> dt;
  std::optional<int> steps;
  int jobs = 1;
  bool oracle = false;
  std::optional<double> tol;
};

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err);
int cmd_evolve(const Options& o, std::ostream& out, std::ostream& err);
int cmd_locc_verify(const Options& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err);

// Generator the LOCC protocol has to reproduce.
GkslGenerator target_generator(const SystemModel& model);

}  // namespace gausep::cli
