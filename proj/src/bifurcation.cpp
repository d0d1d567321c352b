#include "iaf/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "iaf/error.hpp"
#include "iaf/parallel.hpp"
#include "iaf/roots.hpp"
#include "iaf/strobe.hpp"

namespace iaf {
namespace {

constexpr double kDefectTolerance = 1e-15;
constexpr double kAmplitudeCeiling = 1e12;
constexpr double kPeriodFloor = 1e-9;
constexpr double kPeriodCeiling = 1e9;

// At a collision the n-spike fixed point x_n starts the period, fires its
// first crossing at time s, then `gaps` further full interspike intervals end
// exactly at the pulse end dT. Right: x_n relaxes from the reset value 0.
// Left/Zero: x_n relaxes from the threshold itself (grazing limit).
struct CollisionEquations {
  const ModelSpec& model;
  std::int64_t gaps;
  double start;  // state at the pulse end before relaxation

  struct Evaluation {
    double defect = 0.0;  // phi(s; x_n; A) - theta, extended monotonically for s < 0
    double fixed_point = 0.0;
    double first_crossing = 0.0;
    double interspike = 0.0;
  };

  Evaluation evaluate(double A, double d, double T) const {
    const double theta = model.theta();
    Evaluation e;
    e.fixed_point = flow(model, 0.0, T - d * T, start);
    double s = d * T;
    if (gaps > 0) {
      const auto delta = time_to_threshold(model, A, 0.0);
      if (!delta) {
        e.defect = -std::numeric_limits<double>::infinity();
        return e;
      }
      e.interspike = *delta;
      s = d * T - static_cast<double>(gaps) * *delta;
    }
    e.first_crossing = s;
    if (s < 0.0) {
      e.defect = (e.fixed_point - theta) + s;
      return e;
    }
    e.defect = flow(model, A, s, e.fixed_point) - theta;
    return e;
  }

  // Max defect over the full system, each equation re-evaluated independently.
  double residual(double A, double d, double T, const Evaluation& e) const {
    const double theta = model.theta();
    double r = std::abs(flow(model, 0.0, T - d * T, start) - e.fixed_point);
    r = std::max(r, std::abs(e.first_crossing + static_cast<double>(gaps) * e.interspike - d * T));
    if (e.first_crossing < 0.0) return std::numeric_limits<double>::infinity();
    r = std::max(r, std::abs(flow(model, A, e.first_crossing, e.fixed_point) - theta));
    if (gaps > 0) r = std::max(r, std::abs(flow(model, A, e.interspike, 0.0) - theta));
    return r;
  }
};

CollisionEquations equations_for(const ModelSpec& model, std::int64_t n, CollisionSide& side) {
  if (n < 0) throw DomainError("spike count must be non-negative");
  if (side == CollisionSide::Left && n == 0) side = CollisionSide::Zero;
  if (side == CollisionSide::Zero && n != 0) throw DomainError("the zero-spike collision needs n = 0");
  if (side == CollisionSide::Right && n == 0) throw DomainError("right collisions need n >= 1");
  if (side == CollisionSide::Right) return {model, n - 1, 0.0};
  return {model, n, model.theta()};
}

BifPoint finish(const CollisionEquations& eq, std::int64_t n, CollisionSide side, double A, double d,
                double T) {
  const auto e = eq.evaluate(A, d, T);
  BifPoint p;
  p.n = n;
  p.side = side;
  p.d = d;
  p.T = T;
  p.A = A;
  p.fixed_point = e.fixed_point;
  p.first_crossing = e.first_crossing;
  p.interspike = e.interspike;
  p.residual = eq.residual(A, d, T, e);
  if (!(p.residual < kBifResidualTolerance)) {
    std::ostringstream os;
    os << "collision solve not certified: residual " << p.residual << " at A=" << A << " T=" << T;
    throw NotFoundError(os.str());
  }
  return p;
}

std::string describe(std::int64_t n, CollisionSide side) {
  return "n=" + std::to_string(n) + " side=" + to_string(side);
}

}  // namespace

std::string to_string(CollisionSide side) {
  switch (side) {
    case CollisionSide::Right:
      return "R";
    case CollisionSide::Left:
      return "L";
    case CollisionSide::Zero:
      return "zero";
  }
  return "?";
}

BifPoint bif_A(const ModelSpec& model, std::int64_t n, CollisionSide side, double d, double T) {
  if (!(d > 0.0 && d < 1.0)) throw DomainError("duty cycle d must lie in (0,1)");
  if (!(T > 0.0)) throw DomainError("period T must be positive");
  const CollisionEquations eq = equations_for(model, n, side);
  const double qc = critical_dose(model);
  auto defect = [&](double A) { return eq.evaluate(A, d, T).defect; };

  // The defect is increasing in A; with interspike gaps it is -inf up to Q_c.
  double lo = eq.gaps > 0 ? std::max(qc, 0.0) : 0.0;
  double f_lo = defect(lo);
  if (!(f_lo < 0.0)) {
    throw NotFoundError("no collision below the bracket for " + describe(n, side));
  }
  double hi = std::max({1.0, 2.0 * qc / d, 2.0 * lo});
  double f_hi = defect(hi);
  while (!(f_hi > 0.0)) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > kAmplitudeCeiling) throw NotFoundError("no amplitude solves " + describe(n, side));
    f_hi = defect(hi);
  }
  const RootResult root = solve_increasing(defect, lo, hi, f_lo, f_hi, kDefectTolerance);
  return finish(eq, n, side, root.x, d, T);
}

BifPoint bif_T(const ModelSpec& model, std::int64_t n, CollisionSide side, double A, double d) {
  if (!(d > 0.0 && d < 1.0)) throw DomainError("duty cycle d must lie in (0,1)");
  if (!(A >= 0.0)) throw DomainError("amplitude A must be non-negative");
  const CollisionEquations eq = equations_for(model, n, side);
  const double qc = critical_dose(model);
  if (!(A > qc)) throw NotFoundError("non-spiking amplitude: no window for " + describe(n, side));
  if (side == CollisionSide::Zero && !(A * d < qc)) {
    throw NotFoundError("permanent-spiking parameters have no onset period");
  }
  auto defect = [&](double T) { return eq.evaluate(A, d, T).defect; };

  // The defect increases with T: short periods cannot fit the spikes.
  double lo = kPeriodFloor;
  double f_lo = defect(lo);
  if (!(f_lo < 0.0)) throw NotFoundError("no collision period for " + describe(n, side));
  double hi = 1.0;
  double f_hi = defect(hi);
  while (!(f_hi > 0.0)) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > kPeriodCeiling) throw NotFoundError("no period solves " + describe(n, side));
    f_hi = defect(hi);
  }
  const RootResult root = solve_increasing(defect, lo, hi, f_lo, f_hi, kDefectTolerance);
  return finish(eq, n, side, A, d, root.x);
}

double contraction_margin(const ModelSpec& model, const Forcing& forcing) {
  if (!model.is_linear() || model.linear_field().a == 0.0) {
    return contraction_margin_sampled(model, forcing);
  }
  // Every branch of the linear map is affine with slope exp(a (T - k delta)).
  const double a = model.linear_field().a;
  const double theta = model.theta();
  const StroboscopicMap map(model, forcing);
  const auto boundary = boundary_sigma(model, forcing);
  double lo = 0.0;
  std::int64_t spikes = 0;
  if (boundary) {
    lo = boundary->sigma;
    spikes = boundary->n;
  } else {
    spikes = map.step(0.0).spikes;
  }
  const double delta = map.interspike().value_or(0.0);
  const double slope = std::exp(a * (forcing.period() - static_cast<double>(spikes) * delta));
  return (theta - lo) * (1.0 - slope);
}

double contraction_margin_sampled(const ModelSpec& model, const Forcing& forcing, int samples) {
  if (samples < 2) throw DomainError("need at least two derivative samples");
  const double theta = model.theta();
  const StroboscopicMap map(model, forcing);
  const auto boundary = boundary_sigma(model, forcing);
  double lo = 0.0;
  std::int64_t spikes = 0;
  if (boundary) {
    lo = boundary->sigma;
    spikes = boundary->n;
  } else {
    spikes = map.step(0.0).spikes;
  }
  double sup = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (theta - lo) * i / (samples - 1);
    sup = std::max(sup, map.branch_slope(x, spikes));
  }
  return (theta - lo) * (1.0 - sup);
}

RateLimits rate_limits(const ModelSpec& model, double A, double d, const RateLimitOptions& options) {
  const RegionClass region = classify_region(model, A, d);
  if (region.region == Region::NonSpiking) {
    throw DomainError("rate limits need (A, d) in the spiking region (A > Q_c)");
  }
  RateLimits out;
  out.region = region.region;
  out.delta = *time_to_threshold(model, A, 0.0);
  out.r_infinity = d / out.delta;
  out.averaged_delta = averaged_time_to_threshold(model, A * d);
  if (region.region == Region::PermanentSpiking && out.averaged_delta) {
    out.r_zero = 1.0 / *out.averaged_delta;
  } else {
    out.r_zero = 0.0;
    out.T0 = bif_T(model, 0, CollisionSide::Zero, A, d).T;
  }
  out.T1R = bif_T(model, 1, CollisionSide::Right, A, d).T;
  out.T1L = bif_T(model, 1, CollisionSide::Left, A, d).T;

  // Empirical check of the maximum on a log grid around the one-spike window.
  const std::size_t count = std::max<std::size_t>(options.sweep_points, 2);
  const double t_lo = std::min(out.T0.value_or(out.T1R), out.T1R) / 20.0;
  const double t_hi = 20.0 * out.T1L;
  std::vector<double> periods(count);
  std::vector<double> rates(count);
  for (std::size_t i = 0; i < count; ++i) {
    periods[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(count - 1));
  }
  parallel_for(count, options.workers, [&](std::size_t i) {
    rates[i] = attractor(model, Forcing(A, periods[i], d)).rate;
  });
  const auto best = std::max_element(rates.begin(), rates.end());
  out.sampled_max = *best;
  out.T_at_sampled_max = periods[static_cast<std::size_t>(best - rates.begin())];

  const double window_peak = 1.0 / out.T1R;
  out.max_certified = out.sampled_max <= window_peak * (1.0 + 1e-9);
  if (out.max_certified) {
    out.r_max = window_peak;
    out.T_at_max = out.T1R;
  } else {
    out.r_max = out.sampled_max;
    out.T_at_max = out.T_at_sampled_max;
  }

  // Candidates for the global minimum: silence below T0, the T -> 0 limit,
  // and the right end of the one-spike window.
  out.r_min = 1.0 / out.T1L;
  out.T_at_min = out.T1L;
  if (region.region == Region::ConditionalSpiking) {
    out.r_min = 0.0;
    out.T_at_min = 0.5 * *out.T0;
  } else if (out.r_zero < out.r_min) {
    out.r_min = out.r_zero;
    out.T_at_min.reset();
  }
  return out;
}

}  // namespace iaf
