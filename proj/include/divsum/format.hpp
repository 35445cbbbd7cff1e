#pragma once

#include <string>
#include <vector>

namespace divsum {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Ordinary least-squares slope of log(y) against log(x). Entries with
// non-positive x or y are skipped; returns NaN with fewer than two usable points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace divsum
