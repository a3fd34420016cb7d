#include <doctest.h>

#include <algorithm>
#include <vector>

#include "bvf/error.hpp"
#include "bvf/model.hpp"
#include "bvf/selection.hpp"

using namespace bvf;

namespace {

const BvfParams kWeibull{1.34, 1.17, 0.86, 0.91, BaselineKind::Weibull};
const BvfParams kGompertz{1.13, 0.96, 0.79, 1.05, BaselineKind::Gompertz};

CompetingRisksData simulate(const BvfParams& p, std::size_t n, std::uint64_t seed) {
  return from_bivariate(sample(p, n, seed));
}

}  // namespace

TEST_CASE("single candidate is chosen trivially") {
  const auto data = simulate(kGompertz, 200, 1);
  const std::vector<BaselineKind> one{BaselineKind::Gompertz};
  const auto r = select_model(data, one);
  CHECK(r.chosen == BaselineKind::Gompertz);
  REQUIRE(r.ranked.size() == 1);
  CHECK(r.excluded.empty());
}

TEST_CASE("ranking invariants and AIC equivalence") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto data = simulate(seed % 2 ? kWeibull : kGompertz, 150, seed);
    const auto a = select_model(data, kAllBaselineKinds, Criterion::MaxLoglik);
    const auto b = select_model(data, kAllBaselineKinds, Criterion::Aic);
    REQUIRE(!a.ranked.empty());
    CHECK(a.chosen == a.ranked.front().kind);
    CHECK(a.ranked.size() + a.excluded.size() == 3);
    for (std::size_t i = 1; i < a.ranked.size(); ++i)
      CHECK(a.ranked[i - 1].fit.loglik_max >= a.ranked[i].fit.loglik_max);
    for (const auto& r : a.ranked) {
      CHECK(r.fit.status != FitStatus::NoMleMonotoneProfile);
      CHECK(r.aic == -2.0 * r.fit.loglik_max + 2.0 * kModelDimension);
      for (const auto& [k, why] : a.excluded) CHECK(k != r.kind);
    }
    REQUIRE(a.ranked.size() == b.ranked.size());
    for (std::size_t i = 0; i < a.ranked.size(); ++i) CHECK(a.ranked[i].kind == b.ranked[i].kind);
    CHECK(a.chosen == b.chosen);
    // Deterministic given the data.
    const auto again = select_model(data, kAllBaselineKinds);
    CHECK(again.chosen == a.chosen);
    for (std::size_t i = 0; i < a.ranked.size(); ++i)
      CHECK(again.ranked[i].fit.loglik_max == a.ranked[i].fit.loglik_max);
  }
}

TEST_CASE("monotone profiles are excluded, boundary fits are ranked") {
  const auto light = simulate({0.3, 0.9, 1.1, 2.5, BaselineKind::Weibull}, 300, 4);
  const auto r = select_model(light, kAllBaselineKinds);
  const bool lomax_excluded = std::any_of(r.excluded.begin(), r.excluded.end(),
                                          [](const auto& e) { return e.first == BaselineKind::Lomax; });
  CHECK(lomax_excluded);
  CHECK(r.chosen == BaselineKind::Weibull);

  std::vector<CompetingRisksRecord> recs;
  for (const auto& rec : simulate(kWeibull, 200, 8).records())
    if (rec.delta != FailureMode::Risk2First) recs.push_back(rec);
  const auto boundary = select_model(CompetingRisksData::create(recs), kAllBaselineKinds);
  const bool ranked_boundary =
      std::any_of(boundary.ranked.begin(), boundary.ranked.end(),
                  [](const RankedFit& f) { return f.fit.status == FitStatus::BoundaryAlphaZero; });
  CHECK(ranked_boundary);
}

TEST_CASE("candidate list validation") {
  const auto data = simulate(kWeibull, 50, 2);
  const std::vector<BaselineKind> none;
  const std::vector<BaselineKind> dup{BaselineKind::Weibull, BaselineKind::Weibull};
  CHECK_THROWS_AS(select_model(data, none), ValidationError);
  CHECK_THROWS_AS(select_model(data, dup), ValidationError);
  const std::vector<BaselineKind> lomax{BaselineKind::Lomax};
  const auto light = simulate({0.3, 0.9, 1.1, 2.5, BaselineKind::Weibull}, 300, 4);
  CHECK_THROWS_AS(select_model(light, lomax), EstimationError);
}

TEST_CASE("criterion names") {
  CHECK(parse_criterion(to_string(Criterion::MaxLoglik)) == Criterion::MaxLoglik);
  CHECK(parse_criterion(to_string(Criterion::Aic)) == Criterion::Aic);
  CHECK_THROWS_AS(parse_criterion("bic"), ValidationError);
}

TEST_CASE("Weibull parent against Gompertz at n = 300") {
  int weibull = 0;
  const int reps = 500;
  const std::vector<BaselineKind> two{BaselineKind::Weibull, BaselineKind::Gompertz};
  for (int r = 0; r < reps; ++r)
    weibull += select_model(simulate(kWeibull, 300, 1000 + r), two).chosen == BaselineKind::Weibull;
  CHECK(weibull >= 0.80 * reps);
}
