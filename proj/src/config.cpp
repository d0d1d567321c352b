#include "iaf/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "iaf/error.hpp"

namespace iaf {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ConfigError(where + ": " + message);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    fail(where, "malformed value for " + key + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::int64_t to_integer(const std::string& key, const std::string& text, const std::string& where) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(where, "malformed value for " + key + ": '" + text + "' is not an integer");
  }
  return v;
}

bool to_flag(const std::string& key, const std::string& text, const std::string& where) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  fail(where, "malformed value for " + key + ": '" + text + "' is not a boolean");
}

struct Parsed {
  const std::string& key;
  const std::string& text;
  const std::string& where;

  double real() const { return to_real(key, text, where); }
  double positive() const {
    const double v = real();
    if (!(v > 0.0)) fail(where, key + " must be positive");
    return v;
  }
  double non_negative() const {
    const double v = real();
    if (!(v >= 0.0)) fail(where, key + " must be non-negative");
    return v;
  }
  double duty() const {
    const double v = real();
    if (!(v > 0.0 && v < 1.0)) fail(where, key + " must lie in open interval (0,1)");
    return v;
  }
  std::int64_t integer(std::int64_t min) const {
    const std::int64_t v = to_integer(key, text, where);
    if (v < min) fail(where, key + " must be at least " + std::to_string(min));
    return v;
  }
  bool flag() const { return to_flag(key, text, where); }
  std::string choice(std::initializer_list<const char*> allowed) const {
    for (const char* option : allowed) {
      if (text == option) return text;
    }
    std::string list;
    for (const char* option : allowed) list += (list.empty() ? "" : "|") + std::string(option);
    fail(where, key + " must be one of " + list + ", got '" + text + "'");
  }
};

using Setter = std::function<void(ExperimentConfig&, const Parsed&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"model", [](auto& c, const Parsed& p) { c.model = p.choice({"linear", "linear-numeric", "quadratic"}); }},
      {"a", [](auto& c, const Parsed& p) { c.a = p.real(); }},
      {"b", [](auto& c, const Parsed& p) { c.b = p.real(); }},
      {"c", [](auto& c, const Parsed& p) { c.c = p.real(); }},
      {"theta", [](auto& c, const Parsed& p) { c.theta = p.positive(); }},
      {"A", [](auto& c, const Parsed& p) { c.A = p.non_negative(); }},
      {"d", [](auto& c, const Parsed& p) { c.d = p.duty(); }},
      {"T", [](auto& c, const Parsed& p) { c.T = p.positive(); }},
      {"mode", [](auto& c, const Parsed& p) { c.mode = p.choice({"width", "amplitude"}); }},
      {"delta", [](auto& c, const Parsed& p) { c.delta = p.positive(); }},
      {"Q", [](auto& c, const Parsed& p) { c.Q = p.non_negative(); }},
      {"tmin", [](auto& c, const Parsed& p) { c.tmin = p.positive(); }},
      {"tmax", [](auto& c, const Parsed& p) { c.tmax = p.positive(); }},
      {"points", [](auto& c, const Parsed& p) { c.points = static_cast<std::size_t>(p.integer(1)); }},
      {"log", [](auto& c, const Parsed& p) { c.log_spacing = p.flag(); }},
      {"refine", [](auto& c, const Parsed& p) { c.refine = p.flag(); }},
      {"dmin", [](auto& c, const Parsed& p) { c.dmin = p.duty(); }},
      {"dmax", [](auto& c, const Parsed& p) { c.dmax = p.duty(); }},
      {"dpoints", [](auto& c, const Parsed& p) { c.d_points = static_cast<std::size_t>(p.integer(1)); }},
      {"invAmin", [](auto& c, const Parsed& p) { c.inv_amin = p.positive(); }},
      {"invAmax", [](auto& c, const Parsed& p) { c.inv_amax = p.positive(); }},
      {"invApoints", [](auto& c, const Parsed& p) { c.inv_points = static_cast<std::size_t>(p.integer(1)); }},
      {"cap", [](auto& c, const Parsed& p) { c.period_cap = p.integer(1); }},
      {"solve", [](auto& c, const Parsed& p) { c.solve = p.choice({"A", "T"}); }},
      {"side", [](auto& c, const Parsed& p) { c.side = p.choice({"R", "L", "zero"}); }},
      {"spikes", [](auto& c, const Parsed& p) { c.spikes = p.integer(0); }},
      {"levels", [](auto& c, const Parsed& p) { c.levels = static_cast<int>(std::min<std::int64_t>(p.integer(0), 16)); }},
      {"in", [](auto& c, const Parsed& p) { c.input = p.text; }},
      {"out", [](auto& c, const Parsed& p) { c.output = p.text; }},
      {"workers", [](auto& c, const Parsed& p) { c.workers = static_cast<unsigned>(std::min<std::int64_t>(p.integer(1), 1024)); }},
      {"tol_time", [](auto& c, const Parsed& p) { c.tol_time = p.positive(); }},
      {"tol_state", [](auto& c, const Parsed& p) { c.tol_state = p.positive(); }},
      {"seed", [](auto& c, const Parsed& p) { c.seed = p.non_negative(); }},
      {"transient", [](auto& c, const Parsed& p) { c.transient = static_cast<std::size_t>(p.integer(0)); }},
      {"max_period", [](auto& c, const Parsed& p) { c.max_period = static_cast<std::size_t>(p.integer(1)); }},
  };
  return table;
}

std::string origin_of(const ExperimentConfig& config, const std::string& key) {
  const auto it = config.origin.find(key);
  return it == config.origin.end() ? std::string("default") : it->second;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, setter] : setters()) out.push_back(key);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   const std::string& where) {
  const auto& table = setters();
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
  if (it == table.end()) fail(where, "unknown key '" + key + "'");
  it->second(config, Parsed{key, value, where});
  config.origin[key] = where;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  ExperimentConfig config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = path + ":" + std::to_string(number);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(where, "missing key before '='");
    apply_setting(config, key, trim(line.substr(eq + 1)), where);
  }
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  auto ordered = [&](const std::optional<double>& lo, const std::optional<double>& hi, const char* lo_key,
                     const char* hi_key) {
    if (lo && hi && *lo > *hi) {
      fail(origin_of(config, hi_key), std::string(lo_key) + " must not exceed " + hi_key);
    }
  };
  ordered(config.tmin, config.tmax, "tmin", "tmax");
  ordered(config.dmin, config.dmax, "dmin", "dmax");
  ordered(config.inv_amin, config.inv_amax, "invAmin", "invAmax");
  if (config.mode == "amplitude" && config.delta && config.tmin && *config.tmin < *config.delta) {
    fail(origin_of(config, "tmin"), "amplitude correction needs tmin >= delta");
  }

  const ModelSpec model = build_model(config);
  const ValidationReport report = validate_hypotheses(model);
  if (const HypothesisCheck* bad = report.failure()) {
    std::ostringstream os;
    os << (bad->hypothesis == Hypothesis::H1 ? "H.1" : "H.2") << " violated (" << bad->detail;
    if (bad->hypothesis == Hypothesis::H1 && model.is_linear() && config.a != 0.0) {
      os << "; equilibrium -b/a = " << -config.b / config.a << (-config.b / config.a >= config.theta ? " >= theta" : " <= 0");
    }
    os << ")";
    std::string where;
    for (const char* key : {"model", "a", "b", "c", "theta"}) {
      if (config.origin.count(key)) where += (where.empty() ? "" : ", ") + std::string(key) + " at " + origin_of(config, key);
    }
    throw ConfigError((where.empty() ? std::string("model defaults") : where) + ": " + os.str());
  }
}

ModelSpec build_model(const ExperimentConfig& config) {
  IntegratorTolerances tol;
  if (config.tol_time) tol.event_time = *config.tol_time;
  if (config.model == "linear") return ModelSpec::linear(config.a, config.b, config.theta);
  if (config.model == "linear-numeric") return ModelSpec::linear_as_generic(config.a, config.b, config.theta, tol);
  const double a = config.a;
  const double b = config.b;
  const double c = config.c;
  return ModelSpec::generic([a, b, c](double x) { return b + a * x - c * x * x; },
                            [a, c](double x) { return a - 2.0 * c * x; }, config.theta, tol);
}

AttractorOptions attractor_options(const ExperimentConfig& config) {
  AttractorOptions options;
  options.seed = config.seed;
  if (config.tol_state) options.recurrence_tol = *config.tol_state;
  if (config.transient) options.transient = *config.transient;
  if (config.max_period) options.max_period = *config.max_period;
  return options;
}

}  // namespace iaf
