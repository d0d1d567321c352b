#include "iaf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iaf/error.hpp"
#include "iaf/parallel.hpp"

namespace iaf {
namespace {

std::string period_tag(double T) {
  std::ostringstream os;
  os.precision(17);
  os << "T=" << T << ": ";
  return os.str();
}

StaircaseSample evaluate(const ModelSpec& model, const DoseMode& mode, double T,
                         const AttractorOptions& options) {
  try {
    const Forcing forcing = forcing_for(mode, T);
    const OrbitSummary orbit = attractor(model, forcing, options);
    StaircaseSample s;
    s.T = T;
    s.A = forcing.amplitude();
    s.d = forcing.duty();
    s.eta = orbit.eta;
    s.rho = orbit.rho;
    s.rate = orbit.rate;
    s.word = orbit.word;
    s.period_p = orbit.period_p;
    s.converged = orbit.converged;
    s.contraction_ok = orbit.contraction_margin > 0.0;
    return s;
  } catch (const RunawayError& e) {
    throw RunawayError(period_tag(T) + e.what());
  } catch (const IntegrationFailure& e) {
    throw IntegrationFailure(period_tag(T) + e.what());
  } catch (const DomainError& e) {
    throw DomainError(period_tag(T) + e.what());
  }
}

std::vector<StaircaseSample> evaluate_all(const ModelSpec& model, const DoseMode& mode,
                                          const std::vector<double>& periods,
                                          const SweepOptions& options) {
  std::vector<StaircaseSample> out(periods.size());
  parallel_for(periods.size(), options.workers, [&](std::size_t i) {
    out[i] = evaluate(model, mode, periods[i], options.attractor);
  });
  return out;
}

}  // namespace

Forcing forcing_for(const DoseMode& mode, double T) {
  if (const auto* w = std::get_if<WidthCorrection>(&mode)) return Forcing(w->A, T, w->d);
  const auto& a = std::get<AmplitudeCorrection>(mode);
  if (!(a.duration > 0.0)) throw DomainError("pulse duration must be positive");
  if (!(a.Q >= 0.0)) throw DomainError("dose must be non-negative");
  if (T < a.duration) throw DomainError("amplitude correction needs T >= pulse duration");
  double d = a.duration / T;
  if (d >= 1.0) d = std::nextafter(1.0, 0.0);
  return Forcing(a.Q / d, T, d);
}

double mode_dose(const DoseMode& mode) {
  if (const auto* w = std::get_if<WidthCorrection>(&mode)) return w->A * w->d;
  return std::get<AmplitudeCorrection>(mode).Q;
}

std::vector<StaircaseSample> sweep_T(const ModelSpec& model, const DoseMode& mode,
                                     const SweepOptions& options) {
  if (!(options.T_min > 0.0) || !(options.T_max >= options.T_min)) {
    throw DomainError("sweep range needs 0 < T_min <= T_max");
  }
  if (options.points == 0) throw DomainError("sweep needs at least one point");
  if (const auto* a = std::get_if<AmplitudeCorrection>(&mode); a && options.T_min < a->duration) {
    throw DomainError("amplitude-correction sweep must start at T >= pulse duration");
  }

  const bool log = options.log_spacing;
  auto to_axis = [log](double T) { return log ? std::log(T) : T; };
  auto from_axis = [log](double u) { return log ? std::exp(u) : u; };
  const double u_min = to_axis(options.T_min);
  const double u_max = to_axis(options.T_max);

  std::vector<double> periods(options.points);
  for (std::size_t i = 0; i < options.points; ++i) {
    if (i == 0) {
      periods[i] = options.T_min;
    } else if (i + 1 == options.points) {
      periods[i] = options.T_max;
    } else {
      periods[i] = from_axis(u_min + (u_max - u_min) * static_cast<double>(i) /
                                         static_cast<double>(options.points - 1));
    }
  }
  std::vector<StaircaseSample> samples = evaluate_all(model, mode, periods, options);
  if (!options.refine || options.points < 2) return samples;

  const double min_gap = (u_max - u_min) / static_cast<double>(options.points - 1) / 100.0;
  while (true) {
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (samples[i].eta == samples[i + 1].eta) continue;
      const double ul = to_axis(samples[i].T);
      const double ur = to_axis(samples[i + 1].T);
      if (ur - ul <= min_gap) continue;
      mids.push_back(from_axis(0.5 * (ul + ur)));
    }
    if (mids.empty()) break;
    auto added = evaluate_all(model, mode, mids, options);
    samples.insert(samples.end(), std::make_move_iterator(added.begin()),
                   std::make_move_iterator(added.end()));
    std::sort(samples.begin(), samples.end(),
              [](const StaircaseSample& l, const StaircaseSample& r) { return l.T < r.T; });
  }
  return samples;
}

PlaneScan scan_plane(const ModelSpec& model, double T, const std::vector<double>& d_grid,
                     const std::vector<double>& inv_amplitude_grid, const ScanOptions& options) {
  if (!(T > 0.0)) throw DomainError("scan period must be positive");
  for (double d : d_grid) {
    if (!(d > 0.0 && d < 1.0)) throw DomainError("scan duty cycles must lie in (0,1)");
  }
  for (double v : inv_amplitude_grid) {
    if (!(v > 0.0)) throw DomainError("scan 1/A values must be positive");
  }

  PlaneScan scan;
  scan.T = T;
  scan.d_grid = d_grid;
  scan.inv_amplitude_grid = inv_amplitude_grid;
  const std::size_t nodes = d_grid.size() * inv_amplitude_grid.size();
  scan.period.assign(nodes, 0);
  scan.eta.assign(nodes, Rational{});
  scan.errors.assign(nodes, std::string{});
  std::vector<char> capped(nodes, 0);

  AttractorOptions attractor_options = options.attractor;
  attractor_options.max_period = static_cast<std::size_t>(std::max<std::int64_t>(options.period_cap, 1));

  parallel_for(nodes, options.workers, [&](std::size_t k) {
    const std::size_t i = k / inv_amplitude_grid.size();
    const std::size_t j = k % inv_amplitude_grid.size();
    try {
      const OrbitSummary orbit =
          attractor(model, Forcing(1.0 / inv_amplitude_grid[j], T, d_grid[i]), attractor_options);
      scan.eta[k] = orbit.eta;
      if (orbit.converged && orbit.period_p <= options.period_cap) {
        scan.period[k] = orbit.period_p;
      } else {
        capped[k] = 1;
      }
    } catch (const Error& e) {
      capped[k] = 1;
      scan.errors[k] = e.what();
    }
  });
  scan.capped.assign(capped.begin(), capped.end());
  return scan;
}

std::vector<Window> find_windows(const std::vector<StaircaseSample>& samples) {
  std::vector<Window> windows;
  bool open = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const bool usable = s.converged && s.contraction_ok;
    if (!usable) {
      open = false;
      continue;
    }
    if (open && windows.back().word == s.word && windows.back().eta == s.eta) {
      windows.back().T_end = s.T;
      windows.back().last_sample = i;
      continue;
    }
    windows.push_back(Window{s.word, s.eta, s.rho, s.T, s.T, i, i});
    open = true;
  }
  return windows;
}

namespace {

std::int64_t count_rights(const std::string& word) {
  return static_cast<std::int64_t>(std::count(word.begin(), word.end(), 'R'));
}

struct AddingSearch {
  const std::vector<Window>& windows;
  int levels;
  AddingReport& report;

  void check(std::size_t left, std::size_t right, int level) {
    const Window& l = windows[left];
    const Window& r = windows[right];
    AddingCheck c;
    c.left_word = l.word;
    c.right_word = r.word;
    c.expected_word = canonical_rotation(l.word + r.word);
    c.expected_rho = Rational(count_rights(l.word) + count_rights(r.word),
                              static_cast<std::int64_t>(l.word.size() + r.word.size()));
    c.level = level;
    c.gap_begin = l.T_end;
    c.gap_end = r.T_begin;
    const Rational base = l.eta - l.rho;

    std::size_t hit = right;
    for (std::size_t k = left + 1; k < right; ++k) {
      const Window& w = windows[k];
      if (w.word == c.expected_word && w.rho == c.expected_rho && w.eta - w.rho == base) {
        hit = k;
        break;
      }
    }
    c.found = hit != right;
    if (c.found) {
      c.found_begin = windows[hit].T_begin;
      c.found_end = windows[hit].T_end;
    } else {
      ++report.violations;
    }
    report.checks.push_back(c);
    if (c.found && level < levels) {
      check(left, hit, level + 1);
      check(hit, right, level + 1);
    }
  }
};

}  // namespace

AddingReport verify_adding(const std::vector<StaircaseSample>& samples, const AddingOptions& options) {
  AddingReport report;
  report.windows = find_windows(samples);
  if (options.levels < 1) return report;
  const auto& windows = report.windows;

  AddingSearch search{windows, options.levels, report};
  for (std::size_t r = 0; r < windows.size(); ++r) {
    if (windows[r].word != "R") continue;
    const Rational base = windows[r].eta - windows[r].rho;
    for (std::size_t l = r; l-- > 0;) {
      if (windows[l].word == "R" && windows[l].eta - windows[l].rho == base) break;
      if (windows[l].word == "L" && windows[l].eta - windows[l].rho == base) {
        search.check(l, r, 1);
        break;
      }
    }
  }
  return report;
}

}  // namespace iaf
