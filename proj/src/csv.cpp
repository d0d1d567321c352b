#include "iaf/csv.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "iaf/error.hpp"

namespace iaf {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void bad_line(int number, const std::string& why) {
  throw ConfigError("csv line " + std::to_string(number) + ": " + why);
}

std::int64_t read_integer(const std::string& text, int number) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_line(number, "expected an integer, got '" + text + "'");
  }
  return v;
}

double read_real(const std::string& text, int number) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    bad_line(number, "expected a number, got '" + text + "'");
  }
  return v;
}

const char* yes_no(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("cannot format real value");
  return std::string(buf.data(), ptr);
}

void write_staircase(std::ostream& out, const std::vector<StaircaseSample>& samples) {
  out << kStaircaseHeader << '\n';
  for (const auto& s : samples) {
    out << format_real(s.T) << ',' << s.eta.num() << ',' << s.eta.den() << ',' << s.rho.num() << ','
        << s.rho.den() << ',' << format_real(s.rate) << ',' << s.word << ',' << s.period_p << ','
        << yes_no(s.converged) << '\n';
  }
}

std::vector<StaircaseSample> read_staircase(std::istream& in) {
  std::string line;
  int number = 1;
  if (!std::getline(in, line)) bad_line(number, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kStaircaseHeader) bad_line(number, std::string("header must be ") + kStaircaseHeader);

  std::vector<StaircaseSample> samples;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) bad_line(number, "expected 9 fields, got " + std::to_string(f.size()));
    StaircaseSample s;
    s.T = read_real(f[0], number);
    try {
      s.eta = Rational(read_integer(f[1], number), read_integer(f[2], number));
      s.rho = Rational(read_integer(f[3], number), read_integer(f[4], number));
    } catch (const DomainError& e) {
      bad_line(number, e.what());
    }
    s.rate = read_real(f[5], number);
    s.word = f[6];
    if (s.word.empty() || s.word.find_first_not_of("LR") != std::string::npos) {
      bad_line(number, "word must be a non-empty string over {L,R}");
    }
    s.period_p = read_integer(f[7], number);
    if (f[8] != "0" && f[8] != "1") bad_line(number, "converged must be 0 or 1");
    s.converged = f[8] == "1";
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_scan(std::ostream& out, const PlaneScan& scan) {
  out << "d,invA,period,capped,failed,eta_num,eta_den\n";
  for (std::size_t i = 0; i < scan.d_grid.size(); ++i) {
    for (std::size_t j = 0; j < scan.inv_amplitude_grid.size(); ++j) {
      const std::size_t k = scan.index(i, j);
      out << format_real(scan.d_grid[i]) << ',' << format_real(scan.inv_amplitude_grid[j]) << ','
          << scan.period[k] << ',' << yes_no(scan.capped[k]) << ',' << yes_no(!scan.errors[k].empty()) << ','
          << scan.eta[k].num() << ',' << scan.eta[k].den() << '\n';
    }
  }
}

void write_bif(std::ostream& out, const std::vector<BifPoint>& points) {
  out << "n,side,d,T,A,fixed_point,first_crossing,interspike,residual\n";
  for (const auto& p : points) {
    out << p.n << ',' << to_string(p.side) << ',' << format_real(p.d) << ',' << format_real(p.T) << ','
        << format_real(p.A) << ',' << format_real(p.fixed_point) << ',' << format_real(p.first_crossing) << ','
        << format_real(p.interspike) << ',' << format_real(p.residual) << '\n';
  }
}

void write_adding(std::ostream& out, const AddingReport& report) {
  out << "level,left,right,expected,rho_num,rho_den,found,gap_begin,gap_end,found_begin,found_end\n";
  for (const auto& c : report.checks) {
    out << c.level << ',' << c.left_word << ',' << c.right_word << ',' << c.expected_word << ','
        << c.expected_rho.num() << ',' << c.expected_rho.den() << ',' << yes_no(c.found) << ','
        << format_real(c.gap_begin) << ',' << format_real(c.gap_end) << ',';
    if (c.found) out << format_real(c.found_begin) << ',' << format_real(c.found_end);
    else out << ',';
    out << '\n';
  }
}

void write_limits(std::ostream& out, const RateLimits& l) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << "quantity,value\n";
  out << "region," << to_string(l.region) << '\n';
  out << "delta," << format_real(l.delta) << '\n';
  out << "averaged_delta," << opt(l.averaged_delta) << '\n';
  out << "r_infinity," << format_real(l.r_infinity) << '\n';
  out << "r_zero," << format_real(l.r_zero) << '\n';
  out << "T0," << opt(l.T0) << '\n';
  out << "T1R," << format_real(l.T1R) << '\n';
  out << "T1L," << format_real(l.T1L) << '\n';
  out << "r_max," << format_real(l.r_max) << '\n';
  out << "T_at_max," << format_real(l.T_at_max) << '\n';
  out << "max_certified," << yes_no(l.max_certified) << '\n';
  out << "sampled_max," << format_real(l.sampled_max) << '\n';
  out << "T_at_sampled_max," << format_real(l.T_at_sampled_max) << '\n';
  out << "r_min," << format_real(l.r_min) << '\n';
  out << "T_at_min," << opt(l.T_at_min) << '\n';
}

}  // namespace iaf
