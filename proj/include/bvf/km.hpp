#pragma once

#include <vector>

#include "bvf/data.hpp"
#include "bvf/model.hpp"

namespace bvf {

struct KmStep {
  double t;         // distinct event time
  double survival;  // KM estimate on [t, next event time)
  int at_risk;
  int events;
};

// Product-limit estimate of P(T > t) for the observed minimum, ignoring the
// cause of failure; delta = 3 rows are censored. At equal times, events are
// removed before censorings.
std::vector<KmStep> kaplan_meier(const CompetingRisksData& data);

// Right-continuous step function: 1 before the first event.
double km_at(const std::vector<KmStep>& steps, double t);

struct KmCompareRow {
  double t;
  double km_survival;
  double model_survival;  // S0(t)^(alpha0 + alpha1 + alpha2)
};

// One row per distinct event time, merged with `grid_points` equally spaced
// times on (0, max observed t]; sorted by t.
std::vector<KmCompareRow> km_compare(const CompetingRisksData& data, const BvfParams& params,
                                     int grid_points = 200);

}  // namespace bvf
