#pragma once

#include <span>

namespace symdyn {

// Ordinary least-squares slope of y against x. Requires at least two
// distinct x values.
double ols_slope(std::span<const double> x, std::span<const double> y);

// Slope of ln y against ln x.
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace symdyn
