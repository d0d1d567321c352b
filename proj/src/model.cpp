#include "iaf/model.hpp"

#include <cmath>
#include <sstream>

#include "iaf/error.hpp"
#include "integrator.hpp"

namespace iaf {

ModelSpec::ModelSpec(std::variant<LinearField, GenericField> kind, double theta)
    : kind_(std::move(kind)), theta_(theta) {
  if (!std::isfinite(theta_) || theta_ <= 0.0) {
    throw DomainError("threshold theta must be finite and positive");
  }
}

ModelSpec ModelSpec::linear(double a, double b, double theta) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("linear coefficients must be finite");
  return ModelSpec(LinearField{a, b}, theta);
}

ModelSpec ModelSpec::generic(std::function<double(double)> f, std::function<double(double)> df,
                             double theta, IntegratorTolerances tol) {
  if (!f || !df) throw DomainError("generic field requires f and f'");
  return ModelSpec(GenericField{std::move(f), std::move(df), tol}, theta);
}

ModelSpec ModelSpec::linear_as_generic(double a, double b, double theta, IntegratorTolerances tol) {
  return generic([a, b](double x) { return a * x + b; }, [a](double) { return a; }, theta, tol);
}

double ModelSpec::field(double x) const {
  if (const auto* lin = std::get_if<LinearField>(&kind_)) return lin->a * x + lin->b;
  return std::get<GenericField>(kind_).f(x);
}

double ModelSpec::field_derivative(double x) const {
  if (const auto* lin = std::get_if<LinearField>(&kind_)) return lin->a;
  return std::get<GenericField>(kind_).df(x);
}

Forcing::Forcing(double amplitude, double period, double duty)
    : amplitude_(amplitude), period_(period), duty_(duty) {
  if (!std::isfinite(amplitude_) || amplitude_ < 0.0) throw DomainError("amplitude A must be >= 0");
  if (!std::isfinite(period_) || period_ <= 0.0) throw DomainError("period T must be > 0");
  if (!(duty_ > 0.0 && duty_ < 1.0)) throw DomainError("duty cycle d must lie in the open interval (0,1)");
}

bool ValidationReport::passed() const { return failure() == nullptr; }

const HypothesisCheck* ValidationReport::failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

ValidationReport validate_hypotheses(const ModelSpec& model) {
  const double theta = model.theta();
  HypothesisCheck h2;
  h2.hypothesis = Hypothesis::H2;
  HypothesisCheck h1;
  h1.hypothesis = Hypothesis::H1;

  // H.2 first: without a decreasing field the equilibrium statement is moot.
  if (model.is_linear()) {
    const auto& lin = model.linear_field();
    if (!(lin.a < 0.0)) {
      h2.passed = false;
      h2.witness = 0.0;
      h2.detail = "f'(x) = a >= 0";
    }
  } else {
    for (int i = 0; i < kDerivativeCheckPoints; ++i) {
      const double x = theta * i / (kDerivativeCheckPoints - 1);
      const double slope = model.field_derivative(x);
      if (!(slope < 0.0)) {
        h2.passed = false;
        h2.witness = x;
        std::ostringstream os;
        os << "f'(" << x << ") = " << slope << " is not negative";
        h2.detail = os.str();
        break;
      }
    }
  }

  const double f0 = model.field(0.0);
  const double ftheta = model.field(theta);
  if (!(f0 > 0.0)) {
    h1.passed = false;
    h1.witness = 0.0;
    h1.detail = "f(0) <= 0: equilibrium not above the reset value";
  } else if (!(ftheta < 0.0)) {
    h1.passed = false;
    h1.witness = theta;
    if (model.is_linear() && model.linear_field().a != 0.0) {
      h1.witness = -model.linear_field().b / model.linear_field().a;
    }
    h1.detail = "f(theta) >= 0: equilibrium not below the threshold";
  }

  return ValidationReport{{h2, h1}};
}

double flow(const ModelSpec& model, double drive, double t, double x0) {
  if (!(t >= 0.0)) throw DomainError("flow duration must be non-negative");
  if (model.is_linear()) {
    const auto& lin = model.linear_field();
    double x = 0.0;
    if (lin.a == 0.0) {
      x = x0 + (lin.b + drive) * t;
    } else {
      const double target = -(lin.b + drive) / lin.a;
      x = target + (x0 - target) * std::exp(lin.a * t);
    }
    if (!std::isfinite(x)) throw IntegrationFailure("non-finite linear flow");
    return x;
  }
  return detail::integrate_flow(model.generic_field(), drive, t, x0);
}

std::optional<double> time_to_threshold(const ModelSpec& model, double drive, double x0) {
  const double theta = model.theta();
  if (x0 > theta) throw DomainError("initial state lies above the threshold");
  if (x0 == theta) return 0.0;
  // The threshold is reachable iff the velocity stays positive up to theta.
  if (!(model.field(theta) + drive > 0.0) || !(model.field(x0) + drive > 0.0)) {
    return std::nullopt;
  }
  if (model.is_linear()) {
    const auto& lin = model.linear_field();
    if (lin.a == 0.0) return (theta - x0) / (lin.b + drive);
    const double target = -(lin.b + drive) / lin.a;
    return std::log1p((theta - x0) / (x0 - target)) / lin.a;
  }
  return detail::integrate_to_level(model.generic_field(), drive, x0, theta);
}

double critical_dose(const ModelSpec& model) { return -model.field(model.theta()); }

std::optional<double> averaged_time_to_threshold(const ModelSpec& model, double dose) {
  if (dose < 0.0) throw DomainError("dose must be non-negative");
  if (!(dose > critical_dose(model))) return std::nullopt;
  return time_to_threshold(model, dose, 0.0);
}

RegionClass classify_region(const ModelSpec& model, double amplitude, double duty) {
  if (!(duty > 0.0 && duty < 1.0)) throw DomainError("duty cycle d must lie in (0,1)");
  if (amplitude < 0.0) throw DomainError("amplitude A must be >= 0");
  const double qc = critical_dose(model);
  const double dose = amplitude * duty;

  RegionClass out;
  out.near_amplitude_boundary = std::abs(amplitude - qc) <= kRegionBoundaryTolerance;
  out.near_dose_boundary = std::abs(dose - qc) <= kRegionBoundaryTolerance;
  if (!(amplitude > qc)) {
    out.region = Region::NonSpiking;
  } else if (!(dose > qc)) {
    out.region = Region::ConditionalSpiking;
  } else {
    out.region = Region::PermanentSpiking;
  }
  return out;
}

std::string to_string(Region region) {
  switch (region) {
    case Region::NonSpiking:
      return "NonSpiking";
    case Region::ConditionalSpiking:
      return "ConditionalSpiking";
    case Region::PermanentSpiking:
      return "PermanentSpiking";
  }
  return "Unknown";
}

}  // namespace iaf
