#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "iaf/bifurcation.hpp"
#include "iaf/sweep.hpp"

namespace iaf {

/// Shortest text that reads back to the same double.
std::string format_real(double value);

inline constexpr const char* kStaircaseHeader = "T,eta_num,eta_den,rho_num,rho_den,rate,word,period,converged";

void write_staircase(std::ostream& out, const std::vector<StaircaseSample>& samples);

/// Reads a file written by write_staircase. A and d are not stored and come
/// back as 0; contraction_ok comes back false. Throws ConfigError naming the
/// line on malformed input.
std::vector<StaircaseSample> read_staircase(std::istream& in);

void write_scan(std::ostream& out, const PlaneScan& scan);
void write_bif(std::ostream& out, const std::vector<BifPoint>& points);
void write_adding(std::ostream& out, const AddingReport& report);
void write_limits(std::ostream& out, const RateLimits& limits);

}  // namespace iaf
