#include "iaf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "iaf/bifurcation.hpp"
#include "iaf/config.hpp"
#include "iaf/csv.hpp"
#include "iaf/error.hpp"
#include "iaf/parallel.hpp"
#include "iaf/sweep.hpp"

namespace iaf {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("-"); }

template <class T>
T need(const std::optional<T>& v, const char* key, const char* command) {
  if (!v) throw ConfigError(std::string(command) + " needs " + key + " (flag --" + key + " or config key " + key + ")");
  return *v;
}

// Flag name to config key; every flag funnels through apply_setting so the
// file and the command line share one parser.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::string value;
};

class Bindings {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& b = *items_.emplace_back(std::make_unique<Binding>());
    b.key = key;
    b.option = app->add_option(flag, b.value, help);
  }
  void add_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& b = *items_.emplace_back(std::make_unique<Binding>());
    b.key = key;
    b.value = "1";
    b.option = app->add_flag(flag, help);
  }
  void apply(ExperimentConfig& config) const {
    for (const auto& b : items_) {
      if (b->option->count() == 0) continue;
      apply_setting(config, b->key, b->value, "option " + b->option->get_name());
    }
  }

 private:
  std::vector<std::unique_ptr<Binding>> items_;
};

std::ofstream open_output(const ExperimentConfig& config) {
  std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file '" + config.output + "'");
  return out;
}

template <class Writer>
void emit(const ExperimentConfig& config, Writer&& write) {
  if (config.output.empty()) return;
  std::ofstream file = open_output(config);
  write(file);
  file.flush();
  if (!file) throw ConfigError("failed writing '" + config.output + "'");
}

DoseMode dose_mode(const ExperimentConfig& c, const char* command) {
  if (c.mode == "amplitude") return AmplitudeCorrection{need(c.delta, "delta", command), need(c.Q, "Q", command)};
  return WidthCorrection{need(c.A, "A", command), need(c.d, "d", command)};
}

SweepOptions sweep_options(const ExperimentConfig& c, const char* command) {
  SweepOptions o;
  o.T_min = need(c.tmin, "tmin", command);
  o.T_max = need(c.tmax, "tmax", command);
  o.points = c.points;
  o.log_spacing = c.log_spacing;
  o.refine = c.refine;
  o.workers = c.workers;
  o.attractor = attractor_options(c);
  return o;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = n == 1 ? lo : (i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

int cmd_limits(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec model = build_model(c);
  RateLimitOptions options;
  options.workers = c.workers;
  const RateLimits l = rate_limits(model, need(c.A, "A", "limits"), need(c.d, "d", "limits"), options);
  emit(c, [&](std::ostream& f) { write_limits(f, l); });
  out << "limits region=" << to_string(l.region) << " delta=" << num(l.delta) << " r_infinity=" << num(l.r_infinity)
      << " r_zero=" << num(l.r_zero) << " T0=" << num(l.T0) << " T1R=" << num(l.T1R) << " T1L=" << num(l.T1L)
      << " r_max=" << num(l.r_max) << "@T=" << num(l.T_at_max) << (l.max_certified ? "" : "(sampled)")
      << " r_min=" << num(l.r_min) << "@T=" << (l.T_at_min ? num(*l.T_at_min) : std::string("0+")) << '\n';
  return kExitOk;
}

int cmd_classify(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec model = build_model(c);
  const double A = need(c.A, "A", "classify");
  const double d = need(c.d, "d", "classify");
  const RegionClass r = classify_region(model, A, d);
  const double qc = critical_dose(model);
  emit(c, [&](std::ostream& f) {
    f << "A,d,Q,Q_c,region,near_amplitude_boundary,near_dose_boundary\n";
    f << format_real(A) << ',' << format_real(d) << ',' << format_real(A * d) << ',' << format_real(qc) << ','
      << to_string(r.region) << ',' << (r.near_amplitude_boundary ? 1 : 0) << ',' << (r.near_dose_boundary ? 1 : 0)
      << '\n';
  });
  out << to_string(r.region) << " A=" << num(A) << " d=" << num(d) << " Q=" << num(A * d) << " Q_c=" << num(qc);
  if (r.near_amplitude_boundary) out << " (on A=Q_c)";
  if (r.near_dose_boundary) out << " (on Ad=Q_c)";
  out << '\n';
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec model = build_model(c);
  const DoseMode mode = dose_mode(c, "sweep");
  const auto samples = sweep_T(model, mode, sweep_options(c, "sweep"));
  emit(c, [&](std::ostream& f) { write_staircase(f, samples); });
  std::size_t unconverged = 0;
  std::size_t loose = 0;
  for (const auto& s : samples) {
    unconverged += s.converged ? 0 : 1;
    loose += s.contraction_ok ? 0 : 1;
  }
  const auto best = std::max_element(samples.begin(), samples.end(),
                                     [](const auto& l, const auto& r) { return l.rate < r.rate; });
  out << "sweep mode=" << c.mode << " samples=" << samples.size() << " T=[" << num(samples.front().T) << ","
      << num(samples.back().T) << "] max_rate=" << num(best->rate) << "@T=" << num(best->T)
      << " last_rate=" << num(samples.back().rate) << " unconverged=" << unconverged
      << " non_contracting=" << loose << '\n';
  return kExitOk;
}

int cmd_scan(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const ModelSpec model = build_model(c);
  ScanOptions options;
  options.period_cap = c.period_cap;
  options.workers = c.workers;
  options.attractor.seed = c.seed;
  if (c.tol_state) options.attractor.recurrence_tol = *c.tol_state;
  if (c.transient) options.attractor.transient = *c.transient;
  const PlaneScan scan =
      scan_plane(model, need(c.T, "T", "scan"), grid(need(c.dmin, "dmin", "scan"), need(c.dmax, "dmax", "scan"), c.d_points),
                 grid(need(c.inv_amin, "invAmin", "scan"), need(c.inv_amax, "invAmax", "scan"), c.inv_points), options);
  emit(c, [&](std::ostream& f) { write_scan(f, scan); });
  std::size_t capped = 0;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < scan.d_grid.size(); ++i) {
    for (std::size_t j = 0; j < scan.inv_amplitude_grid.size(); ++j) {
      const std::size_t k = scan.index(i, j);
      capped += scan.capped[k] ? 1 : 0;
      if (!scan.errors[k].empty()) {
        ++failed;
        err << "node d=" << format_real(scan.d_grid[i]) << " invA=" << format_real(scan.inv_amplitude_grid[j])
            << ": " << scan.errors[k] << '\n';
      }
    }
  }
  out << "scan T=" << num(scan.T) << " nodes=" << scan.period.size() << " capped=" << capped << " failed=" << failed
      << " cap=" << c.period_cap << '\n';
  return kExitOk;
}

CollisionSide parse_side(const std::string& s) {
  if (s == "R") return CollisionSide::Right;
  if (s == "L") return CollisionSide::Left;
  return CollisionSide::Zero;
}

int cmd_bif(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec model = build_model(c);
  const CollisionSide side = parse_side(c.side);
  const double d = need(c.d, "d", "bif");
  std::vector<BifPoint> points;
  if (c.solve == "T") {
    points.push_back(bif_T(model, c.spikes, side, need(c.A, "A", "bif"), d));
  } else if (c.T) {
    points.push_back(bif_A(model, c.spikes, side, d, *c.T));
  } else {
    // Curve over a period range.
    const double lo = need(c.tmin, "T or tmin", "bif --solve A");
    const double hi = need(c.tmax, "T or tmax", "bif --solve A");
    std::vector<double> periods = grid(lo, hi, c.points);
    if (c.log_spacing) {
      periods = grid(std::log(lo), std::log(hi), c.points);
      for (auto& t : periods) t = std::exp(t);
      periods.front() = lo;
      periods.back() = hi;
    }
    points.resize(periods.size());
    parallel_for(periods.size(), c.workers, [&](std::size_t i) {
      try {
        points[i] = bif_A(model, c.spikes, side, d, periods[i]);
      } catch (const NotFoundError& e) {
        throw NotFoundError("T=" + format_real(periods[i]) + ": " + e.what());
      }
    });
  }
  emit(c, [&](std::ostream& f) { write_bif(f, points); });
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, p.residual);
  out << "bif solve=" << c.solve << " n=" << c.spikes << " side=" << to_string(side) << " d=" << num(d);
  if (points.size() == 1) {
    out << " A=" << num(points[0].A) << " T=" << num(points[0].T) << " x_n=" << num(points[0].fixed_point);
  } else {
    out << " points=" << points.size() << " A=[" << num(points.front().A) << "," << num(points.back().A) << "]";
  }
  out << " residual=" << num(worst) << '\n';
  return kExitOk;
}

int cmd_adding(const ExperimentConfig& c, std::ostream& out) {
  const ModelSpec model = build_model(c);
  const DoseMode mode = dose_mode(c, "adding-check");
  std::vector<StaircaseSample> samples;
  if (!c.input.empty()) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file '" + c.input + "'");
    samples = read_staircase(in);
    // The CSV does not carry A, d or the contraction flag; rebuild them.
    for (auto& s : samples) {
      const Forcing f = forcing_for(mode, s.T);
      s.A = f.amplitude();
      s.d = f.duty();
      s.contraction_ok = contraction_margin(model, f) > 0.0;
    }
  } else {
    samples = sweep_T(model, mode, sweep_options(c, "adding-check"));
  }
  AddingOptions options;
  options.levels = c.levels;
  const AddingReport report = verify_adding(samples, options);
  emit(c, [&](std::ostream& f) { write_adding(f, report); });
  std::size_t found = 0;
  for (const auto& ch : report.checks) found += ch.found ? 1 : 0;
  out << "adding-check samples=" << samples.size() << " windows=" << report.windows.size()
      << " checks=" << report.checks.size() << " found=" << found << " violations=" << report.violations << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stroboscopic analysis of pulse-forced integrate-and-fire models", "iafmap"};
  app.fallthrough();
  app.require_subcommand(1);
  Bindings bind;

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags override it");
  bind.add(&app, "--workers", "workers", "worker threads");
  bind.add(&app, "--tol-time", "tol_time", "event time tolerance of the integrator");
  bind.add(&app, "--tol-state", "tol_state", "recurrence tolerance of the attractor search");
  bind.add(&app, "-o,--out", "out", "CSV output path");
  bind.add(&app, "--model", "model", "linear | linear-numeric | quadratic");
  bind.add(&app, "--a", "a", "field slope a");
  bind.add(&app, "--b", "b", "field offset b");
  bind.add(&app, "--c", "c", "quadratic coefficient c (f = b + a x - c x^2)");
  bind.add(&app, "--theta", "theta", "threshold");
  bind.add(&app, "--seed", "seed", "initial state of the attractor search");
  bind.add(&app, "--transient", "transient", "transient map iterations");
  bind.add(&app, "--max-period", "max_period", "longest period searched");

  auto forcing_flags = [&](CLI::App* sub) {
    bind.add(sub, "--A", "A", "pulse amplitude");
    bind.add(sub, "--d", "d", "duty cycle in (0,1)");
  };
  auto range_flags = [&](CLI::App* sub) {
    bind.add(sub, "--tmin", "tmin", "smallest period");
    bind.add(sub, "--tmax", "tmax", "largest period");
    bind.add_flag(sub, "--log", "log", "log-spaced periods");
  };
  auto sweep_flags = [&](CLI::App* sub) {
    forcing_flags(sub);
    range_flags(sub);
    bind.add(sub, "--mode", "mode", "width | amplitude");
    bind.add(sub, "--delta", "delta", "pulse duration (amplitude mode)");
    bind.add(sub, "--Q", "Q", "dose (amplitude mode)");
    bind.add(sub, "--n,--points", "points", "grid points");
    bind.add_flag(sub, "--refine", "refine", "bisect steps of the firing number");
  };

  auto* limits = app.add_subcommand("limits", "rate limits and extrema over T");
  forcing_flags(limits);
  auto* classify = app.add_subcommand("classify", "spiking region of (A, d)");
  forcing_flags(classify);
  auto* sweep = app.add_subcommand("sweep", "firing-rate staircase over T");
  sweep_flags(sweep);
  auto* scan = app.add_subcommand("scan", "attractor periods over a (d, 1/A) grid");
  bind.add(scan, "--T", "T", "period");
  bind.add(scan, "--dmin", "dmin", "smallest duty cycle");
  bind.add(scan, "--dmax", "dmax", "largest duty cycle");
  bind.add(scan, "--dn", "dpoints", "duty cycle points");
  bind.add(scan, "--invAmin", "invAmin", "smallest 1/A");
  bind.add(scan, "--invAmax", "invAmax", "largest 1/A");
  bind.add(scan, "--invAn", "invApoints", "1/A points");
  bind.add(scan, "--cap", "cap", "largest period reported");
  auto* bif = app.add_subcommand("bif", "border-collision curves");
  forcing_flags(bif);
  range_flags(bif);
  bind.add(bif, "--T", "T", "period (solve A at one point)");
  bind.add(bif, "--solve", "solve", "A | T");
  bind.add(bif, "--side", "side", "R | L | zero");
  bind.add(bif, "--n,--spikes", "spikes", "spikes per period of the fixed point");
  bind.add(bif, "--points", "points", "curve points over [tmin, tmax]");
  auto* adding = app.add_subcommand("adding-check", "period-adding and Farey check of a staircase");
  sweep_flags(adding);
  bind.add(adding, "--in", "in", "staircase CSV to check instead of sweeping");
  bind.add(adding, "--levels", "levels", "Farey levels below each L/R pair");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : parse_config(config_path);
    bind.apply(config);
    validate_config(config);
    if (limits->parsed()) return cmd_limits(config, out);
    if (classify->parsed()) return cmd_classify(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
    if (scan->parsed()) return cmd_scan(config, out, err);
    if (bif->parsed()) return cmd_bif(config, out);
    return cmd_adding(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace iaf
