#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "iaf/model.hpp"

namespace iaf {

/// Which border collision is being solved. Right: the n-spike fixed point sits
/// on Sigma_n. Left: it reaches Sigma_{n+1} from below. Zero: the non-spiking
/// fixed point meets Sigma_1 (the A_0 curve).
enum class CollisionSide { Right, Left, Zero };

std::string to_string(CollisionSide side);

struct BifPoint {
  std::int64_t n = 0;
  CollisionSide side = CollisionSide::Right;
  double d = 0.0;
  double T = 0.0;
  double A = 0.0;
  double fixed_point = 0.0;    // x_n at the collision
  double first_crossing = 0.0; // time of the first threshold crossing from x_n
  double interspike = 0.0;     // reset-to-threshold time under the pulse (0 if n spikes not needed)
  double residual = 0.0;       // max defect over the defining equations
};

inline constexpr double kBifResidualTolerance = 1e-9;

/// Solves the collision equations for the amplitude at fixed (d, T).
BifPoint bif_A(const ModelSpec& model, std::int64_t n, CollisionSide side, double d, double T);

/// Solves the collision equations for the period at fixed (A, d).
BifPoint bif_T(const ModelSpec& model, std::int64_t n, CollisionSide side, double A, double d);

struct RateLimitOptions {
  std::size_t sweep_points = 200;  // log-spaced check of the maximum
  unsigned workers = 1;
};

struct RateLimits {
  double delta = 0.0;                   // threshold time from 0 under A
  std::optional<double> averaged_delta; // threshold time under the dose Ad
  double r_infinity = 0.0;              // d / delta
  double r_zero = 0.0;                  // 1 / averaged_delta, or 0
  std::optional<double> T0;             // onset period (conditional region)
  double T1R = 0.0;
  double T1L = 0.0;
  double r_max = 0.0;
  double T_at_max = 0.0;
  bool max_certified = false;           // sampled sweep never beat 1/T1R
  double sampled_max = 0.0;
  double T_at_sampled_max = 0.0;
  double r_min = 0.0;
  std::optional<double> T_at_min;       // absent when the minimum is only approached as T -> 0
  Region region = Region::PermanentSpiking;
};

RateLimits rate_limits(const ModelSpec& model, double A, double d, const RateLimitOptions& options = {});

/// |[Sigma_n, theta]| - |s([Sigma_n, theta])|. Positive means the map contracts
/// its right branch. Without a discontinuity the whole domain is one branch.
double contraction_margin(const ModelSpec& model, const Forcing& forcing);

/// Same quantity from sampled branch derivatives: (theta - Sigma) (1 - sup s').
/// Used for generic fields and as the cross-check of the closed form.
double contraction_margin_sampled(const ModelSpec& model, const Forcing& forcing, int samples = 64);

}  // namespace iaf
