#pragma once

#include <optional>

#include "iaf/model.hpp"

namespace iaf::detail {

/// Integrates x' = f(x) + drive for time t >= 0 with adaptive Dormand-Prince 5(4).
double integrate_flow(const GenericField& field, double drive, double t, double x0);

/// First time the trajectory from x0 reaches `level` (from below), located by
/// bisection on the dense output. Assumes x' > 0 on [x0, level].
double integrate_to_level(const GenericField& field, double drive, double x0, double level);

}  // namespace iaf::detail
