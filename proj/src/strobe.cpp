#include "iaf/strobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iaf/bifurcation.hpp"
#include "iaf/error.hpp"
#include "iaf/roots.hpp"

namespace iaf {

StroboscopicMap::StroboscopicMap(const ModelSpec& model, const Forcing& forcing,
                                 std::int64_t spike_cap)
    : model_(&model), forcing_(forcing), spike_cap_(spike_cap) {
  interspike_ = time_to_threshold(model, forcing.amplitude(), 0.0);
  if (model.is_linear() && model.linear_field().a != 0.0) {
    const auto& lin = model.linear_field();
    linear_ = true;
    slope_ = lin.a;
    pulse_target_ = -(lin.b + forcing.amplitude()) / lin.a;
    rest_target_ = -lin.b / lin.a;
    relax_factor_ = std::exp(lin.a * forcing.off_duration());
    pulse_factor_ = std::exp(lin.a * forcing.pulse_duration());
  }
}

std::optional<double> StroboscopicMap::first_crossing(double x) const {
  if (linear_) {
    const double theta = model_->theta();
    if (x == theta) return 0.0;
    if (!interspike_) return std::nullopt;
    return std::log1p((theta - x) / (x - pulse_target_)) / slope_;
  }
  return time_to_threshold(*model_, forcing_.amplitude(), x);
}

double StroboscopicMap::pulse_flow(double t, double x) const {
  if (linear_) return pulse_target_ + (x - pulse_target_) * std::exp(slope_ * t);
  return flow(*model_, forcing_.amplitude(), t, x);
}

double StroboscopicMap::relax(double x) const {
  if (linear_) return rest_target_ + (x - rest_target_) * relax_factor_;
  return flow(*model_, 0.0, forcing_.off_duration(), x);
}

// Crossings happen at first + k * interspike; those with time <= pulse count.
std::int64_t StroboscopicMap::count_spikes(double first, double pulse) const {
  const double gap = *interspike_;
  const double estimate = std::floor((pulse - first) / gap);
  if (estimate + 1.0 > static_cast<double>(spike_cap_)) {
    throw RunawayError("spike count exceeds the guard of " + std::to_string(spike_cap_));
  }
  auto n = static_cast<std::int64_t>(estimate) + 1;
  while (n > 1 && first + static_cast<double>(n - 1) * gap > pulse) --n;
  while (first + static_cast<double>(n) * gap <= pulse) ++n;
  if (n > spike_cap_) {
    throw RunawayError("spike count exceeds the guard of " + std::to_string(spike_cap_));
  }
  return n;
}

StrobeStep StroboscopicMap::step(double x) const {
  const double pulse = forcing_.pulse_duration();
  const auto first = first_crossing(x);
  if (!first || *first > pulse) {
    const double end = linear_ ? pulse_target_ + (x - pulse_target_) * pulse_factor_
                               : pulse_flow(pulse, x);
    return {relax(end), 0};
  }
  if (!interspike_) {
    // Starting on the threshold with a drive too weak to fire again.
    return {relax(pulse_flow(pulse - *first, 0.0)), 1};
  }
  const std::int64_t n = count_spikes(*first, pulse);
  const double last = *first + static_cast<double>(n - 1) * *interspike_;
  return {relax(pulse_flow(std::max(0.0, pulse - last), 0.0)), n};
}

StrobeResult StroboscopicMap::apply(double x) const {
  const StrobeStep s = step(x);
  StrobeResult out{s.image, s.spikes, {}};
  if (s.spikes > 0) {
    const double first = *first_crossing(x);
    const double gap = interspike_.value_or(0.0);
    out.spike_times.reserve(static_cast<std::size_t>(s.spikes));
    for (std::int64_t k = 0; k < s.spikes; ++k) {
      out.spike_times.push_back(first + static_cast<double>(k) * gap);
    }
  }
  return out;
}

double StroboscopicMap::branch_image(double x, std::int64_t spikes) const {
  const double pulse = forcing_.pulse_duration();
  if (spikes == 0) return relax(pulse_flow(pulse, x));
  const auto first = first_crossing(x);
  if (!first || !interspike_) throw DomainError("spiking branch requested where the threshold is unreachable");
  const double last = *first + static_cast<double>(spikes - 1) * *interspike_;
  return relax(pulse_flow(std::max(0.0, pulse - last), 0.0));
}

double StroboscopicMap::branch_slope(double x, std::int64_t spikes) const {
  // In one dimension d phi(t; x)/dx = v(phi) / v(x) for any autonomous
  // velocity v; a reset only shifts the trajectory in time, which contributes
  // the same factor.
  const double drive = forcing_.amplitude();
  const double pulse = forcing_.pulse_duration();
  double end = 0.0;
  if (spikes == 0) {
    end = pulse_flow(pulse, x);
  } else {
    const auto first = first_crossing(x);
    if (!first || !interspike_) throw DomainError("spiking branch requested where the threshold is unreachable");
    const double last = *first + static_cast<double>(spikes - 1) * *interspike_;
    end = pulse_flow(std::max(0.0, pulse - last), 0.0);
  }
  const double image = relax(end);

  auto transfer = [&](double v_to, double v_from, double at, double duration) {
    if (std::abs(v_from) < 1e-14) return std::exp(model_->field_derivative(at) * duration);
    return v_to / v_from;
  };
  const double on = transfer(model_->field(end) + drive, model_->field(x) + drive, x, pulse);
  const double off = transfer(model_->field(image), model_->field(end), end, forcing_.off_duration());
  return on * off;
}

StrobeResult strobe(const ModelSpec& model, const Forcing& forcing, double x0) {
  if (!(x0 >= 0.0 && x0 < model.theta())) throw DomainError("strobe requires x0 in [0, theta)");
  return StroboscopicMap(model, forcing).apply(x0);
}

std::optional<BoundaryInfo> boundary_sigma(const ModelSpec& model, const Forcing& forcing) {
  const StroboscopicMap map(model, forcing);
  const double theta = model.theta();
  double lo = 0.0;
  double hi = std::nextafter(theta, 0.0);
  const std::int64_t n_lo = map.step(lo).spikes;
  const std::int64_t n_hi = map.step(hi).spikes;
  if (n_lo == n_hi) return std::nullopt;
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (map.step(mid).spikes > n_lo) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return BoundaryInfo{hi, map.step(hi).spikes};
}

Rational rotation_number(std::string_view word) {
  if (word.empty()) throw DomainError("rotation number of an empty word");
  std::int64_t rights = 0;
  for (char c : word) {
    if (c == 'R') {
      ++rights;
    } else if (c != 'L') {
      throw DomainError(std::string("invalid itinerary symbol '") + c + "'");
    }
  }
  return Rational(rights, static_cast<std::int64_t>(word.size()));
}

std::size_t least_rotation_index(std::string_view word) {
  const std::size_t n = word.size();
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    const char a = word[(i + k) % n];
    const char b = word[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return n == 0 ? 0 : std::min(i, j);
}

std::string canonical_rotation(std::string_view word) {
  const std::size_t r = least_rotation_index(word);
  std::string out(word.substr(r));
  out.append(word.substr(0, r));
  return out;
}

OrbitSummary attractor(const ModelSpec& model, const Forcing& forcing,
                       const AttractorOptions& options) {
  if (options.max_period == 0) throw DomainError("max_period must be positive");
  const StroboscopicMap map(model, forcing, options.spike_cap);
  const double theta = model.theta();
  const auto boundary = boundary_sigma(model, forcing);

  double x = std::clamp(options.seed, 0.0, std::nextafter(theta, 0.0));
  std::size_t steps = 0;
  for (; steps < options.transient; ++steps) x = map.step(x).image;

  std::vector<double> xs;
  std::vector<std::int64_t> ks;
  xs.reserve(std::min<std::size_t>(options.max_period + 1, 1 << 16));
  std::size_t period = 0;
  double best_error = std::numeric_limits<double>::infinity();
  std::size_t best_period = 1;

  auto verify = [&](std::size_t p) {
    double y = xs[p];
    for (std::size_t j = 0; j < p; ++j) {
      const StrobeStep s = map.step(y);
      if (s.spikes != ks[j] || std::abs(s.image - xs[j + 1]) >= options.recurrence_tol) return false;
      y = s.image;
    }
    return true;
  };

  bool budget_left = true;
  while (period == 0 && budget_left) {
    xs.assign(1, x);
    ks.clear();
    best_error = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= options.max_period; ++k) {
      const StrobeStep s = map.step(xs.back());
      ++steps;
      ks.push_back(s.spikes);
      xs.push_back(s.image);
      const double err = std::abs(s.image - xs.front());
      if (err < best_error) {
        best_error = err;
        best_period = k;
      }
      if (err < options.recurrence_tol && verify(k)) {
        steps += k;
        period = k;
        break;
      }
    }
    x = xs.back();
    budget_left = steps < options.max_steps;
  }

  OrbitSummary out;
  out.converged = period != 0;
  const std::size_t p = out.converged ? period : best_period;
  out.recurrence_error = std::abs(xs[p] - xs[0]);
  std::vector<double> points(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(p));
  std::vector<std::int64_t> counts(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(p));

  std::string word(p, 'L');
  out.single_branch = !boundary.has_value();
  if (boundary) {
    for (std::size_t j = 0; j < p; ++j) word[j] = counts[j] == boundary->n ? 'R' : 'L';
  }
  const std::size_t r = least_rotation_index(word);
  std::rotate(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(r), word.end());
  std::rotate(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(r), points.end());
  std::rotate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(r), counts.end());

  out.period_p = static_cast<std::int64_t>(p);
  out.spikes_n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  out.word = std::move(word);
  out.eta = Rational(out.spikes_n, out.period_p);
  out.rho = rotation_number(out.word);
  out.rate = out.eta.to_double() / forcing.period();
  out.points = std::move(points);
  out.spikes_per_step = std::move(counts);
  out.contraction_margin = contraction_margin(model, forcing);
  return out;
}

std::optional<double> fixed_point(const ModelSpec& model, const Forcing& forcing, std::int64_t n) {
  if (n < 0) throw DomainError("spike count must be non-negative");
  const StroboscopicMap map(model, forcing);
  const double theta = model.theta();
  const auto boundary = boundary_sigma(model, forcing);

  double lo = 0.0;
  double hi = theta;
  if (boundary) {
    if (n == boundary->n) {
      lo = boundary->sigma;
    } else if (n == boundary->n - 1) {
      hi = boundary->sigma;
    } else {
      return std::nullopt;
    }
  } else if (map.step(0.0).spikes != n) {
    return std::nullopt;
  }
  if (n > 0 && !map.interspike()) return std::nullopt;

  // g(x) = x - s_n(x) changes sign from <= 0 at lo to > 0 at hi when the
  // branch holds a fixed point; hi itself belongs to the next branch.
  auto g = [&](double x) { return x - map.branch_image(x, n); };
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo > 0.0 || g_hi <= 0.0) return std::nullopt;
  if (g_lo == 0.0) return lo;

  const RootResult root = solve_increasing(g, lo, hi, g_lo, g_hi, 1e-15);
  double x = root.x;
  if (!(x >= lo && x < hi)) return std::nullopt;
  return x;
}

}  // namespace iaf
