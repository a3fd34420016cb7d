#include "bvf/optimize.hpp"

#include <cmath>

namespace bvf::optimize {

BrentResult brent_maximize(const std::function<double(double)>& f, double lo, double start, double f_start,
                           double hi, double abs_tol, double rel_tol, int max_evals) {
  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  // Minimize g = -f.
  double a = lo, b = hi;
  double x = start, w = start, v = start;
  double gx = -f_start, gw = gx, gv = gx;
  double d = 0.0, e = 0.0;
  int evals = 0;

  while (evals < max_evals) {
    const double mid = 0.5 * (a + b);
    const double tol1 = rel_tol * std::fabs(x) + abs_tol;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - mid) <= tol2 - 0.5 * (b - a)) return {x, -gx, evals, true};

    bool golden = true;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (gx - gv);
      double q = (x - v) * (gx - gw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (mid >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= mid) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    double gu = -f(u);
    ++evals;
    if (std::isnan(gu)) gu = INFINITY;

    if (gu <= gx) {
      if (u >= x) a = x; else b = x;
      v = w; gv = gw;
      w = x; gw = gx;
      x = u; gx = gu;
    } else {
      if (u < x) a = u; else b = u;
      if (gu <= gw || w == x) {
        v = w; gv = gw;
        w = u; gw = gu;
      } else if (gu <= gv || v == x || v == w) {
        v = u; gv = gu;
      }
    }
  }
  return {x, -gx, evals, false};
}

}  // namespace bvf::optimize
