#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iaf/model.hpp"
#include "iaf/strobe.hpp"
#include "iaf/sweep.hpp"

namespace iaf {

/// Everything a CLI run needs. Values come from a key=value file and/or
/// command-line flags; flags are applied last so they win.
struct ExperimentConfig {
  // Model. "linear" uses closed forms, "linear-numeric" the same field through
  // the integrator, "quadratic" is f(x) = b + a x - c x^2.
  std::string model = "linear";
  double a = -0.5;
  double b = 0.2;
  double c = 0.0;
  double theta = 1.0;

  // Forcing.
  std::optional<double> A;
  std::optional<double> d;
  std::optional<double> T;
  std::string mode = "width";  // width | amplitude
  std::optional<double> delta;  // pulse duration, amplitude mode
  std::optional<double> Q;

  // Period sweep.
  std::optional<double> tmin;
  std::optional<double> tmax;
  std::size_t points = 200;
  bool log_spacing = false;
  bool refine = false;

  // Plane scan.
  std::optional<double> dmin;
  std::optional<double> dmax;
  std::size_t d_points = 50;
  std::optional<double> inv_amin;
  std::optional<double> inv_amax;
  std::size_t inv_points = 50;
  std::int64_t period_cap = 20;

  // Bifurcation solves.
  std::string solve = "A";  // A | T
  std::string side = "R";   // R | L | zero
  std::int64_t spikes = 1;

  // Adding check.
  int levels = 2;
  std::string input;

  std::string output;
  unsigned workers = 1;
  std::optional<double> tol_time;
  std::optional<double> tol_state;
  double seed = 0.0;
  std::optional<std::size_t> transient;
  std::optional<std::size_t> max_period;

  // Where each key was last set ("file:line" or "command line").
  std::map<std::string, std::string> origin;
};

/// Known keys, in the order they are documented.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value. `where` is used in error messages.
/// Throws ConfigError on unknown keys, malformed values or values outside
/// the key's own domain.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   const std::string& where);

/// Reads a key=value file ('#' starts a comment) and validates the result.
ExperimentConfig parse_config(const std::string& path);

/// Cross-key checks: ordered ranges and the model hypotheses.
void validate_config(const ExperimentConfig& config);

ModelSpec build_model(const ExperimentConfig& config);
AttractorOptions attractor_options(const ExperimentConfig& config);

}  // namespace iaf
