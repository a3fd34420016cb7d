#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "bvf/data.hpp"
#include "bvf/error.hpp"
#include "bvf/model.hpp"

using namespace bvf;

namespace {

CompetingRisksData parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

const BvfParams kWeibull{1.34, 1.17, 0.86, 0.91, BaselineKind::Weibull};

}  // namespace

TEST_CASE("conversion from bivariate pairs") {
  const std::vector<BivariatePair> pairs{{1, 2}, {3, 3}, {5, 4}};
  const auto d = from_bivariate(pairs);
  REQUIRE(d.size() == 3);
  CHECK(d.records()[0] == CompetingRisksRecord{1, FailureMode::Risk1First});
  CHECK(d.records()[1] == CompetingRisksRecord{3, FailureMode::Tie});
  CHECK(d.records()[2] == CompetingRisksRecord{4, FailureMode::Risk2First});
  CHECK_FALSE(d.censoring_time().has_value());

  const auto c = from_bivariate(pairs, 2.5);
  CHECK(c.records()[0] == CompetingRisksRecord{1, FailureMode::Risk1First});
  CHECK(c.records()[1] == CompetingRisksRecord{2.5, FailureMode::Censored});
  CHECK(c.records()[2] == CompetingRisksRecord{2.5, FailureMode::Censored});
  CHECK(c.counts() == std::array<std::size_t, 4>{0, 1, 0, 2});
  CHECK(c.censoring_time() == 2.5);

  // A failure exactly at C is observed.
  const auto edge = from_bivariate(std::vector<BivariatePair>{{2.5, 3.0}}, 2.5);
  CHECK(edge.records()[0].delta == FailureMode::Risk1First);

  CHECK_THROWS_AS(from_bivariate(std::vector<BivariatePair>{{0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(from_bivariate(pairs, 0.0), DomainError);
  CHECK_THROWS_AS(from_bivariate(pairs, -1.0), DomainError);
}

TEST_CASE("partition is exhaustive and converges to the ordering probabilities") {
  const std::size_t n = 100000;
  const auto pairs = sample(kWeibull, n, 4242);
  const auto d = from_bivariate(pairs);
  const auto& m = d.counts();
  CHECK(m[0] + m[1] + m[2] + m[3] == n);
  CHECK(m[3] == 0);
  const auto o = tie_probability(kWeibull);
  for (auto [count, q] : {std::pair{m[0], o.tie}, std::pair{m[1], o.x_first}, std::pair{m[2], o.y_first}})
    CHECK(std::abs(count / double(n) - q) < 3 * std::sqrt(q * (1 - q) / n));

  const double c = censoring_threshold(kWeibull, 0.2);
  const auto cd = from_bivariate(pairs, c);
  CHECK(cd.size() == n);
  CHECK(std::abs(cd.count(FailureMode::Censored) / double(n) - 0.2) < 3 * std::sqrt(0.2 * 0.8 / n));
}

TEST_CASE("record validation") {
  CHECK_THROWS_WITH_AS(CompetingRisksData::create({}), "no records", ValidationError);
  CHECK_THROWS_AS(CompetingRisksData::create({{-1.0, FailureMode::Tie}}), ValidationError);
  CHECK_THROWS_AS(CompetingRisksData::create({{0.0, FailureMode::Tie}}), ValidationError);
  CHECK_THROWS_WITH_AS(CompetingRisksData::create({{5, FailureMode::Censored}, {7, FailureMode::Censored}}),
                       "censored times differ", ValidationError);
  CHECK_THROWS_AS(CompetingRisksData::create({{5, FailureMode::Censored}, {7, FailureMode::Tie}}), ValidationError);
  const auto d = CompetingRisksData::create({{2, FailureMode::Tie}, {5, FailureMode::Censored}});
  CHECK(d.censoring_time() == 5.0);
  CHECK(d.failures() == 1);
}

TEST_CASE("csv loading") {
  const auto d = parse("t,delta\n843,1\n1010,2\n1267,0\n");
  CHECK(d.size() == 3);
  CHECK(d.counts() == std::array<std::size_t, 4>{1, 1, 1, 0});

  CHECK_THROWS_WITH_AS(parse("t,delta\n"), "no records", ValidationError);
  CHECK_THROWS_WITH_AS(parse("t,delta\n5,3\n7,3\n"), "censored times differ", ValidationError);

  const auto commented = parse("# a comment\n\nt,delta\n# another\n1.5,1\n\n2.5,3\n");
  CHECK(commented.size() == 2);
  CHECK(commented.censoring_time() == 2.5);

  try {
    parse("t,delta\n1,1\n2,7\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("time,cause\n1,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,delta\nabc,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,delta\n-1,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,delta\n1\n"), ParseError);
}

TEST_CASE("csv round trip is the identity, including the censoring time") {
  const auto pairs = sample(kWeibull, 257, 5);
  for (std::optional<double> c : {std::optional<double>{}, std::optional<double>{censoring_threshold(kWeibull, 0.4)},
                                  std::optional<double>{1e6}}) {
    const auto d = from_bivariate(pairs, c);
    std::ostringstream out;
    write_csv(d, out);
    const auto back = parse(out.str());
    CHECK(back == d);
  }
  const auto path = std::filesystem::temp_directory_path() / "bvf_test_roundtrip.csv";
  const auto d = from_bivariate(pairs);
  save_csv(d, path);
  CHECK(load_csv(path) == d);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_csv("/nonexistent/dir/file.csv"), ValidationError);
}

TEST_CASE("record order is preserved") {
  const auto d = parse("t,delta\n3,1\n1,2\n2,0\n");
  CHECK(d.records()[0].t == 3);
  CHECK(d.records()[1].t == 1);
  CHECK(d.records()[2].t == 2);
}
