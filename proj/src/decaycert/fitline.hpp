/**
 * Least-squares line fit for log-log exponent estimation.
 */
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace decaycert {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |y - (slope*x + intercept)|
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  assert(xs.size() == ys.size() && xs.size() >= 2);
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  for (size_t k = 0; k < xs.size(); ++k)
    fit.max_residual = std::max(fit.max_residual,
                                std::fabs(ys[k] - (fit.slope * xs[k] + fit.intercept)));
  return fit;
}

}  // namespace decaycert
