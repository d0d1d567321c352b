#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace iaf {

/// Subthreshold field f(x) = a x + b.
struct LinearField {
  double a = 0.0;
  double b = 0.0;
};

/// Tolerances for the adaptive integrator used by generic fields.
struct IntegratorTolerances {
  double relative = 1e-10;
  double absolute = 1e-12;
  double event_time = 1e-12;
};

/// Arbitrary scalar field given as f and f'. Flows are integrated numerically.
struct GenericField {
  std::function<double(double)> f;
  std::function<double(double)> df;
  IntegratorTolerances tolerances{};
};

/// Subthreshold dynamics x' = f(x) plus the firing threshold theta.
///
/// Construction only checks that theta is finite and positive; the
/// attracting-equilibrium hypotheses are checked by validate_hypotheses so a
/// bad model can still be inspected and reported on.
class ModelSpec {
 public:
  static ModelSpec linear(double a, double b, double theta);
  static ModelSpec generic(std::function<double(double)> f, std::function<double(double)> df,
                           double theta, IntegratorTolerances tol = {});
  /// The linear field evaluated through the numerical integrator. Used to
  /// cross-check the generic path against the closed form.
  static ModelSpec linear_as_generic(double a, double b, double theta,
                                     IntegratorTolerances tol = {});

  double theta() const { return theta_; }
  double field(double x) const;
  double field_derivative(double x) const;

  bool is_linear() const { return std::holds_alternative<LinearField>(kind_); }
  const LinearField& linear_field() const { return std::get<LinearField>(kind_); }
  const GenericField& generic_field() const { return std::get<GenericField>(kind_); }

 private:
  ModelSpec(std::variant<LinearField, GenericField> kind, double theta);

  std::variant<LinearField, GenericField> kind_;
  double theta_;
};

/// Periodic square pulse: amplitude A on (nT, nT + dT], zero for the rest of
/// the period.
class Forcing {
 public:
  Forcing(double amplitude, double period, double duty);

  double amplitude() const { return amplitude_; }
  double period() const { return period_; }
  double duty() const { return duty_; }
  double dose() const { return amplitude_ * duty_; }
  double pulse_duration() const { return duty_ * period_; }
  double off_duration() const { return period_ - duty_ * period_; }

 private:
  double amplitude_;
  double period_;
  double duty_;
};

enum class Hypothesis { H1, H2 };

struct HypothesisCheck {
  Hypothesis hypothesis = Hypothesis::H1;
  bool passed = true;
  std::optional<double> witness;  // state where the failure shows
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool passed() const;
  /// First failing check, if any.
  const HypothesisCheck* failure() const;
};

/// Number of grid points used to sample f' for generic fields.
inline constexpr int kDerivativeCheckPoints = 1024;

ValidationReport validate_hypotheses(const ModelSpec& model);

/// Solution of x' = f(x) + drive after time t starting from x0 (no reset).
double flow(const ModelSpec& model, double drive, double t, double x0);

/// Smallest t >= 0 with flow(t, x0) = theta, or nullopt when the threshold
/// cannot be reached under this drive.
std::optional<double> time_to_threshold(const ModelSpec& model, double drive, double x0);

/// Q_c = -f(theta).
double critical_dose(const ModelSpec& model);

/// Threshold time from 0 for the averaged system x' = f(x) + Q. Absent unless
/// Q exceeds the critical dose.
std::optional<double> averaged_time_to_threshold(const ModelSpec& model, double dose);

enum class Region { NonSpiking, ConditionalSpiking, PermanentSpiking };

struct RegionClass {
  Region region = Region::NonSpiking;
  bool near_amplitude_boundary = false;  // |A - Q_c| within tolerance
  bool near_dose_boundary = false;       // |A d - Q_c| within tolerance
};

inline constexpr double kRegionBoundaryTolerance = 1e-12;

RegionClass classify_region(const ModelSpec& model, double amplitude, double duty);

std::string to_string(Region region);

}  // namespace iaf
