#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "iaf/model.hpp"
#include "iaf/rational.hpp"
#include "iaf/strobe.hpp"

namespace iaf {

/// Dose kept constant by fixing (A, d) and stretching the pulse with T.
struct WidthCorrection {
  double A = 0.0;
  double d = 0.0;
};

/// Dose kept constant by fixing the pulse duration and scaling the amplitude:
/// (d, 1/A) = (duration / T, duration / (Q T)).
struct AmplitudeCorrection {
  double duration = 0.0;
  double Q = 0.0;
};

using DoseMode = std::variant<WidthCorrection, AmplitudeCorrection>;

/// Forcing at period T under a dose mode. With amplitude correction T must be
/// at least the pulse duration; at T equal to it the duty cycle is taken as
/// the largest double below 1.
Forcing forcing_for(const DoseMode& mode, double T);
double mode_dose(const DoseMode& mode);

struct StaircaseSample {
  double T = 0.0;
  double A = 0.0;
  double d = 0.0;
  Rational eta;
  Rational rho;
  double rate = 0.0;
  std::string word;
  std::int64_t period_p = 0;
  bool converged = false;
  bool contraction_ok = false;
};

struct SweepOptions {
  double T_min = 0.0;
  double T_max = 0.0;
  std::size_t points = 100;
  bool log_spacing = false;
  /// Bisect neighbours whose firing numbers differ until they are closer than
  /// 1/100 of the base grid spacing.
  bool refine = false;
  unsigned workers = 1;
  AttractorOptions attractor{};
};

std::vector<StaircaseSample> sweep_T(const ModelSpec& model, const DoseMode& mode,
                                     const SweepOptions& options);

struct ScanOptions {
  std::int64_t period_cap = 20;
  unsigned workers = 1;
  AttractorOptions attractor{2'000, 20, 0.0, 1e-9, 200'000, kDefaultSpikeCap};
};

/// Attractor periods over a (d, 1/A) grid at fixed T. Node (i, j) pairs
/// d_grid[i] with inv_amplitude_grid[j] and is stored at i * inv_size + j.
struct PlaneScan {
  double T = 0.0;
  std::vector<double> d_grid;
  std::vector<double> inv_amplitude_grid;
  std::vector<std::int64_t> period;  // capped nodes hold 0
  std::vector<bool> capped;
  std::vector<Rational> eta;
  std::vector<std::string> errors;  // empty string when the node succeeded

  std::size_t index(std::size_t i_d, std::size_t j_inv) const {
    return i_d * inv_amplitude_grid.size() + j_inv;
  }
};

PlaneScan scan_plane(const ModelSpec& model, double T, const std::vector<double>& d_grid,
                     const std::vector<double>& inv_amplitude_grid, const ScanOptions& options = {});

/// Maximal run of consecutive samples sharing one converged itinerary.
struct Window {
  std::string word;
  Rational eta;
  Rational rho;
  double T_begin = 0.0;
  double T_end = 0.0;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
};

struct AddingCheck {
  std::string left_word;
  std::string right_word;
  std::string expected_word;
  Rational expected_rho;
  int level = 0;
  bool found = false;
  double gap_begin = 0.0;  // T interval between the two parent windows
  double gap_end = 0.0;
  double found_begin = 0.0;
  double found_end = 0.0;
};

struct AddingReport {
  std::vector<Window> windows;
  std::vector<AddingCheck> checks;
  std::size_t violations = 0;
};

struct AddingOptions {
  /// Farey levels below each parent pair; level 1 holds the first mediant.
  int levels = 2;
};

/// Windows of maximal runs, keeping only converged samples in the contracting regime.
std::vector<Window> find_windows(const std::vector<StaircaseSample>& samples);

/// Checks the period-adding structure: between windows sigma and omega whose
/// rotation numbers are Farey neighbours, a window with itinerary sigma omega
/// and mediant rotation number must appear, recursively for `levels` levels.
/// The root pairs are the 'L' and 'R' fixed-point windows sharing a boundary.
AddingReport verify_adding(const std::vector<StaircaseSample>& samples, const AddingOptions& options = {});

}  // namespace iaf
