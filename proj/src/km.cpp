#include "bvf/km.hpp"

#include <algorithm>
#include <cmath>

#include "bvf/error.hpp"

namespace bvf {

std::vector<KmStep> kaplan_meier(const CompetingRisksData& data) {
  std::vector<CompetingRisksRecord> sorted = data.records();
  // Events sort ahead of censorings at the same time.
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.t != b.t) return a.t < b.t;
    return (a.delta != FailureMode::Censored) && (b.delta == FailureMode::Censored);
  });

  std::vector<KmStep> steps;
  double s = 1.0;
  int at_risk = static_cast<int>(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i].t;
    int events = 0, censored = 0;
    for (; i < sorted.size() && sorted[i].t == t; ++i) {
      if (sorted[i].delta == FailureMode::Censored)
        ++censored;
      else
        ++events;
    }
    if (events > 0) {
      s *= 1.0 - static_cast<double>(events) / at_risk;
      steps.push_back({t, s, at_risk, events});
    }
    at_risk -= events + censored;
  }
  return steps;
}

double km_at(const std::vector<KmStep>& steps, double t) {
  auto it = std::upper_bound(steps.begin(), steps.end(), t, [](double v, const KmStep& s) { return v < s.t; });
  if (it == steps.begin()) return 1.0;
  return std::prev(it)->survival;
}

std::vector<KmCompareRow> km_compare(const CompetingRisksData& data, const BvfParams& params, int grid_points) {
  params.validate();
  if (grid_points < 0) throw ValidationError("grid size must be non-negative");
  const auto steps = kaplan_meier(data);
  double t_max = 0.0;
  for (const auto& r : data.records()) t_max = std::max(t_max, r.t);

  std::vector<double> times;
  times.reserve(steps.size() + static_cast<std::size_t>(grid_points));
  for (const auto& s : steps) times.push_back(s.t);
  for (int g = 1; g <= grid_points; ++g) times.push_back(t_max * g / grid_points);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const double a = params.alpha_sum();
  std::vector<KmCompareRow> rows;
  rows.reserve(times.size());
  for (double t : times)
    rows.push_back({t, km_at(steps, t), std::exp(a * baseline::log_s0(params.kind, t, params.lambda))});
  return rows;
}

}  // namespace bvf
