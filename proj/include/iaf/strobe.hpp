#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iaf/model.hpp"
#include "iaf/rational.hpp"

namespace iaf {

inline constexpr std::int64_t kDefaultSpikeCap = 1'000'000;

/// One application of the stroboscopic map.
struct StrobeResult {
  double image = 0.0;
  std::int64_t spikes = 0;
  std::vector<double> spike_times;  // strictly increasing, in (0, T]
};

struct StrobeStep {
  double image = 0.0;
  std::int64_t spikes = 0;
};

/// Discontinuity of the map: x0 >= sigma spikes n times per period, x0 < sigma
/// spikes n - 1 times.
struct BoundaryInfo {
  double sigma = 0.0;
  std::int64_t n = 0;
};

/// Time-T return map of the pulsed system with reset to 0 at the threshold.
///
/// A trajectory that reaches the threshold exactly at the end of the pulse is
/// reset, so the map at a boundary takes its right-branch value. Holds a
/// reference to the model; the model must outlive the map.
class StroboscopicMap {
 public:
  StroboscopicMap(const ModelSpec& model, const Forcing& forcing,
                  std::int64_t spike_cap = kDefaultSpikeCap);

  StrobeStep step(double x) const;
  StrobeResult apply(double x) const;

  /// Smooth continuation of the branch with `spikes` spikes evaluated at x.
  /// Valid on the closure of that branch's domain.
  double branch_image(double x, std::int64_t spikes) const;
  /// Derivative of branch_image with respect to x.
  double branch_slope(double x, std::int64_t spikes) const;

  const ModelSpec& model() const { return *model_; }
  const Forcing& forcing() const { return forcing_; }
  /// Time from reset to threshold under the pulse, when reachable.
  std::optional<double> interspike() const { return interspike_; }

 private:
  std::optional<double> first_crossing(double x) const;
  double pulse_flow(double t, double x) const;
  double relax(double x) const;
  std::int64_t count_spikes(double first, double pulse) const;

  const ModelSpec* model_;
  Forcing forcing_;
  std::int64_t spike_cap_;
  std::optional<double> interspike_;
  // Closed-form constants for linear fields.
  bool linear_ = false;
  double slope_ = 0.0;
  double pulse_target_ = 0.0;
  double rest_target_ = 0.0;
  double relax_factor_ = 0.0;
  double pulse_factor_ = 0.0;
};

StrobeResult strobe(const ModelSpec& model, const Forcing& forcing, double x0);

/// Locates the map's discontinuity by bisection on the spike count, down to
/// adjacent doubles. The returned sigma is the smallest state with n spikes.
std::optional<BoundaryInfo> boundary_sigma(const ModelSpec& model, const Forcing& forcing);

struct AttractorOptions {
  std::size_t transient = 10'000;
  std::size_t max_period = 10'000;
  double seed = 0.0;
  double recurrence_tol = 1e-9;
  /// Total map evaluations allowed before giving up on recurrence. The
  /// transient is extended in max_period chunks until this budget runs out.
  std::size_t max_steps = 1'000'000;
  std::int64_t spike_cap = kDefaultSpikeCap;
};

struct OrbitSummary {
  std::int64_t period_p = 0;
  std::int64_t spikes_n = 0;
  std::string word;  // canonical (least) rotation of the itinerary
  Rational eta;
  Rational rho;
  double rate = 0.0;
  std::vector<double> points;
  std::vector<std::int64_t> spikes_per_step;
  bool converged = false;
  bool single_branch = false;
  double contraction_margin = 0.0;
  double recurrence_error = 0.0;
};

OrbitSummary attractor(const ModelSpec& model, const Forcing& forcing,
                       const AttractorOptions& options = {});

/// Fixed point of the map on its n-spike branch, if that branch has one.
std::optional<double> fixed_point(const ModelSpec& model, const Forcing& forcing, std::int64_t n);

/// Fraction of 'R' symbols in an itinerary over {L, R}.
Rational rotation_number(std::string_view word);

/// Lexicographically least cyclic rotation of a word.
std::string canonical_rotation(std::string_view word);
std::size_t least_rotation_index(std::string_view word);

}  // namespace iaf
