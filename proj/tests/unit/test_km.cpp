#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bvf/km.hpp"
#include "bvf/model.hpp"

using namespace bvf;

TEST_CASE("product limit without ties") {
  const auto d = CompetingRisksData::create(
      {{1, FailureMode::Risk1First}, {2, FailureMode::Tie}, {3, FailureMode::Risk2First}});
  const auto steps = kaplan_meier(d);
  REQUIRE(steps.size() == 3);
  CHECK(km_at(steps, 0.5) == 1.0);
  CHECK(km_at(steps, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(km_at(steps, 1.5) == doctest::Approx(2.0 / 3.0));
  CHECK(km_at(steps, 2.5) == doctest::Approx(1.0 / 3.0));
  CHECK(km_at(steps, 3.0) == 0.0);
}

TEST_CASE("all censored gives a constant curve") {
  const auto d = CompetingRisksData::create({{4, FailureMode::Censored}, {4, FailureMode::Censored}});
  const auto steps = kaplan_meier(d);
  CHECK(steps.empty());
  CHECK(km_at(steps, 10.0) == 1.0);
}

TEST_CASE("events are removed before censorings at equal times") {
  const auto d = CompetingRisksData::create({{1, FailureMode::Risk1First},
                                              {2, FailureMode::Risk1First},
                                              {2, FailureMode::Censored},
                                              {2, FailureMode::Censored}});
  const auto steps = kaplan_meier(d);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].survival == doctest::Approx(0.75));
  CHECK(steps[1].at_risk == 3);
  CHECK(steps[1].survival == doctest::Approx(0.75 * 2.0 / 3.0));
}

TEST_CASE("comparison rows") {
  const BvfParams p{1.34, 1.17, 0.86, 0.91, BaselineKind::Weibull};
  const auto d = from_bivariate(sample(p, 200, 3), censoring_threshold(p, 0.3));
  const auto rows = km_compare(d, p, 50);
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.t < b.t; }));
  const auto steps = kaplan_meier(d);
  CHECK(rows.size() >= steps.size());
  for (const auto& r : rows) {
    CHECK(r.model_survival == doctest::Approx(joint_survival(p, r.t, r.t)).epsilon(1e-12));
    CHECK(r.km_survival == km_at(steps, r.t));
  }
}

TEST_CASE("large sample curve approaches the model") {
  const BvfParams p{1.34, 1.17, 0.86, 0.91, BaselineKind::Weibull};
  const auto d = from_bivariate(sample(p, 50000, 6));
  double worst = 0.0;
  for (const auto& r : km_compare(d, p, 500)) worst = std::max(worst, std::abs(r.km_survival - r.model_survival));
  CHECK(worst < 0.02);
}
