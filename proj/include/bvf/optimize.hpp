#pragma once

#include <functional>

namespace bvf::optimize {

struct BrentResult {
  double x;
  double fx;
  int evaluations;
  bool converged;
};

// Maximizes f on [lo, hi] by golden-section search with parabolic
// interpolation (Brent). `start` must satisfy lo < start < hi with
// f(start) >= f(lo), f(hi); its value is passed in to avoid re-evaluation.
// Stops when the bracket half-width is below 2 * (rel_tol * |x| + abs_tol).
BrentResult brent_maximize(const std::function<double(double)>& f, double lo, double start, double f_start,
                           double hi, double abs_tol, double rel_tol, int max_evals);

}  // namespace bvf::optimize
