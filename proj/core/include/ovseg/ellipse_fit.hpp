#pragma once

#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

/// Direct least-squares conic fit constrained to an ellipse (minimizes the
/// sum of squared algebraic distances), returned in geometric form.
/// Requires at least 5 points that are not all collinear; throws FitFailure
/// when the constrained eigenproblem yields no valid ellipse.
Ellipse fit_ellipse_lesf(const std::vector<Point2>& points);

} // namespace ovseg
