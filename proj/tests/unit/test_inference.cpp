#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "bvf/data.hpp"
#include "bvf/error.hpp"
#include "bvf/inference.hpp"
#include "bvf/kernels.hpp"
#include "bvf/model.hpp"
#include "bvf/normal.hpp"
#include "bvf/optimize.hpp"
#include "bvf/rng.hpp"
#include "oracles/oracles.hpp"

using namespace bvf;

namespace {

const BvfParams kWeibull{1.34, 1.17, 0.86, 0.91, BaselineKind::Weibull};
const BvfParams kGompertz{1.13, 0.96, 0.79, 1.05, BaselineKind::Gompertz};
const BvfParams kLomax{0.85, 0.57, 0.74, 0.69, BaselineKind::Lomax};
const std::array<BvfParams, 3> kCaptionParams{kWeibull, kGompertz, kLomax};

CompetingRisksData simulate(const BvfParams& p, std::size_t n, std::uint64_t seed, double censor = 0.0) {
  std::optional<double> c;
  if (censor > 0.0) c = censoring_threshold(p, censor);
  return from_bivariate(sample(p, n, seed), c);
}

double central_derivative(const std::function<double(double)>& f, double x) {
  const double h = 1e-5 * x;
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("log-likelihood point values") {
  const BvfParams unit{1, 1, 1, 1, BaselineKind::Weibull};
  CHECK(log_likelihood(unit, CompetingRisksData::create({{1.0, FailureMode::Censored}})) ==
        doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(log_likelihood(unit, CompetingRisksData::create({{1.0, FailureMode::Risk1First}})) ==
        doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("log-likelihood matches the per-record oracle") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (const auto& truth : kCaptionParams)
    for (double censor : {0.0, 0.3}) {
      const auto data = simulate(truth, 300, 99, censor);
      for (int r = 0; r < 20; ++r) {
        const BvfParams p{u(eng), u(eng), u(eng), u(eng), truth.kind};
        const double ref = static_cast<double>(oracle::loglik(data, truth.kind, {p.alpha0, p.alpha1, p.alpha2, p.lambda}));
        CHECK(log_likelihood(p, data) == doctest::Approx(ref).epsilon(1e-12));
      }
    }
}

TEST_CASE("closed-form alphas") {
  const auto d = CompetingRisksData::create(
      {{1, FailureMode::Tie}, {1, FailureMode::Risk1First}, {1, FailureMode::Risk2First}});
  const auto a = alphas_given_lambda(1.0, d, BaselineKind::Weibull);
  for (double v : a) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(profile_loglik(1.0, d, BaselineKind::Weibull) == doctest::Approx(-3.0 * std::log(3.0)).epsilon(1e-14));

  const auto no2 = CompetingRisksData::create({{1, FailureMode::Tie}, {2, FailureMode::Risk1First}});
  CHECK(alphas_given_lambda(1.3, no2, BaselineKind::Gompertz)[2] == 0.0);
  for (double v : alphas_given_lambda(1.3, d, BaselineKind::Lomax)) CHECK(v > 0.0);
}

TEST_CASE("closed-form alphas maximize the likelihood at fixed lambda") {
  std::mt19937_64 eng(3);
  std::normal_distribution<double> z(0.0, 0.3);
  for (const auto& truth : kCaptionParams) {
    const auto data = simulate(truth, 200, 5, 0.2);
    for (double lam : {0.5, truth.lambda, 2.0}) {
      const auto a = alphas_given_lambda(lam, data, truth.kind);
      const double best = log_likelihood({a[0], a[1], a[2], lam, truth.kind}, data);
      for (int r = 0; r < 1000 / 9; ++r) {
        const BvfParams q{a[0] * std::exp(z(eng)), a[1] * std::exp(z(eng)), a[2] * std::exp(z(eng)), lam, truth.kind};
        CHECK(log_likelihood(q, data) <= best);
      }
    }
  }
}

TEST_CASE("profile decomposition constant") {
  for (const auto& truth : kCaptionParams)
    for (double censor : {0.0, 0.4}) {
      const auto data = simulate(truth, 200, 17, censor);
      const double c = profile_constant(data);
      for (int i = 0; i < 50; ++i) {
        const double lam = 0.05 * std::pow(100.0, i / 49.0);
        const auto a = alphas_given_lambda(lam, data, truth.kind);
        const double gap = log_likelihood({a[0], a[1], a[2], lam, truth.kind}, data) -
                           profile_loglik(lam, data, truth.kind);
        CHECK(gap == doctest::Approx(c).epsilon(1e-12));
      }
    }
}

TEST_CASE("profile argmax agrees with a dense grid search of the concentrated likelihood") {
  const auto data = simulate(kWeibull, 200, 23);
  const FitResult fit = fit_mle(data, BaselineKind::Weibull);
  REQUIRE(fit.status == FitStatus::Converged);
  double best_l = 0.0, best_v = -INFINITY;
  // Concentrated likelihood evaluated by the per-record oracle.
  for (int i = 0; i <= 20000; ++i) {
    const double l = 0.6 + 0.6 * i / 20000;
    const auto a = alphas_given_lambda(l, data, BaselineKind::Weibull);
    const double v = static_cast<double>(oracle::loglik(data, BaselineKind::Weibull, {a[0], a[1], a[2], l}));
    if (v > best_v) {
      best_v = v;
      best_l = l;
    }
  }
  CHECK(std::abs(fit.params_hat->lambda - best_l) < 1e-4 * best_l);
}

TEST_CASE("fit is consistent at large n") {
  const auto data = simulate(kWeibull, 100000, 8);
  const FitResult fit = fit_mle(data, BaselineKind::Weibull);
  REQUIRE(fit.status == FitStatus::Converged);
  const auto est = fit.params_hat->theta();
  const auto tru = kWeibull.theta();
  for (int j = 0; j < 4; ++j) CHECK(std::abs(est[j] - tru[j]) < 0.05 * tru[j]);
}

TEST_CASE("fit invariants: stationarity, interior bracket, recomputed loglik, trace") {
  FitOptions opts;
  opts.record_trace = true;
  for (const auto& truth : kCaptionParams)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto data = simulate(truth, 200, seed, 0.2);
      const FitResult fit = fit_mle(data, truth.kind, opts);
      REQUIRE(fit.status == FitStatus::Converged);
      const double lam = fit.params_hat->lambda;
      CHECK(lam > opts.lambda_min);
      CHECK(lam < opts.lambda_max);
      const ProfileContext ctx(data, truth.kind);
      const double deriv = central_derivative([&](double l) { return ctx.profile(l); }, lam);
      CHECK(std::abs(deriv) < 1e-6 * (1.0 + std::abs(ctx.profile(lam))));
      CHECK(fit.loglik_max == log_likelihood(*fit.params_hat, data));
      CHECK(fit.n_evals == static_cast<int>(fit.profile_trace.size()));
      CHECK(std::is_sorted(fit.profile_trace.begin(), fit.profile_trace.end()));
      CHECK(fit.n_evals <= opts.max_evals);
    }
}

TEST_CASE("monotone profile yields no estimate") {
  // Light-tailed data: the Lomax profile keeps rising towards its exponential limit.
  const auto data = simulate({0.3, 0.9, 1.1, 2.5, BaselineKind::Weibull}, 300, 4);
  FitOptions opts;
  opts.record_trace = true;
  const FitResult fit = fit_mle(data, BaselineKind::Lomax, opts);
  CHECK(fit.status == FitStatus::NoMleMonotoneProfile);
  CHECK_FALSE(fit.has_estimate());
  CHECK(std::isnan(fit.loglik_max));
  CHECK_FALSE(fit.warnings.empty());
  for (std::size_t i = 1; i < fit.profile_trace.size(); ++i)
    CHECK(fit.profile_trace[i].second < fit.profile_trace[i - 1].second);
}

TEST_CASE("fit preconditions and boundary estimates") {
  const auto censored = CompetingRisksData::create({{2, FailureMode::Censored}, {2, FailureMode::Censored}});
  CHECK_THROWS_WITH_AS(fit_mle(censored, BaselineKind::Weibull), "no failures observed", EstimationError);

  // Drop every tie: alpha0 sits on the boundary.
  std::vector<CompetingRisksRecord> recs;
  for (const auto& r : simulate(kGompertz, 300, 6).records())
    if (r.delta != FailureMode::Tie) recs.push_back(r);
  const auto data = CompetingRisksData::create(recs);
  const FitResult fit = fit_mle(data, BaselineKind::Gompertz);
  CHECK(fit.status == FitStatus::BoundaryAlphaZero);
  REQUIRE(fit.has_estimate());
  CHECK(fit.params_hat->alpha0 == 0.0);
  CHECK(fit.params_hat->alpha1 > 0.0);
  CHECK_FALSE(fit.warnings.empty());
  const auto ci = asymptotic_ci(fit, data);
  CHECK_FALSE(ci.intervals[0].has_value());
  for (int j = 1; j < 4; ++j) CHECK(ci.intervals[j].has_value());
  CHECK_THROWS_AS(bootstrap_ci(fit, data, 50, 0.95, 1), EstimationError);
}

TEST_CASE("fit status names") {
  for (FitStatus s : {FitStatus::Converged, FitStatus::NoMleMonotoneProfile, FitStatus::BoundaryAlphaZero})
    CHECK(parse_fit_status(to_string(s)) == s);
  CHECK_THROWS_AS(parse_fit_status("Diverged"), ValidationError);
}

TEST_CASE("observed information: alpha block closed forms") {
  for (const auto& truth : kCaptionParams) {
    const auto data = simulate(truth, 400, 12, 0.2);
    const FitResult fit = fit_mle(data, truth.kind);
    const auto info = observed_fisher(*fit.params_hat, data);
    for (int k = 0; k < 3; ++k) {
      const double a = fit.params_hat->alpha(k);
      const double closed = data.counts()[k] / (a * a);
      CHECK(std::abs(info(k, k) - closed) < 1e-4 * closed);
      for (int l = k + 1; l < 3; ++l) CHECK(std::abs(info(k, l)) < 1e-6 * std::sqrt(info(k, k) * info(l, l)));
    }
    CHECK(info.isApprox(info.transpose()));
  }

  // m0 = 10 at alpha0 = 0.5 gives 40.
  std::vector<CompetingRisksRecord> recs;
  for (int i = 0; i < 10; ++i) recs.push_back({0.1 * (i + 1), FailureMode::Tie});
  for (int i = 0; i < 5; ++i) recs.push_back({0.15 * (i + 1), FailureMode::Risk1First});
  for (int i = 0; i < 5; ++i) recs.push_back({0.12 * (i + 1), FailureMode::Risk2First});
  const auto d = CompetingRisksData::create(recs);
  const auto I = observed_fisher({0.5, 0.4, 0.3, 1.2, BaselineKind::Weibull}, d);
  CHECK(I(0, 0) == doctest::Approx(40.0).epsilon(1e-6));
}

TEST_CASE("observed information agrees with an independent extended-precision difference scheme") {
  for (const auto& truth : kCaptionParams) {
    const auto data = simulate(truth, 250, 21);
    const BvfParams p{truth.alpha0 * 1.1, truth.alpha1 * 0.9, truth.alpha2 * 1.05, truth.lambda * 0.97, truth.kind};
    const auto I = observed_fisher(p, data);
    const std::array<oracle::Real, 4> th{p.alpha0, p.alpha1, p.alpha2, p.lambda};
    const oracle::Real h = 1e-4L;
    auto f = [&](int a, oracle::Real da, int b, oracle::Real db) {
      auto t = th;
      if (a >= 0) t[a] += da * t[a];
      if (b >= 0) t[b] += db * t[b];
      return oracle::loglik(data, truth.kind, t);
    };
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        oracle::Real v;
        if (a == b)
          v = (f(a, h, -1, 0) - 2 * f(-1, 0, -1, 0) + f(a, -h, -1, 0)) / (h * h * th[a] * th[a]);
        else
          v = (f(a, h, b, h) - f(a, h, b, -h) - f(a, -h, b, h) + f(a, -h, b, -h)) / (4 * h * h * th[a] * th[b]);
        const double ref = -static_cast<double>(v);
        const double scale = std::sqrt(std::abs(I(a, a) * I(b, b)));
        CHECK_MESSAGE(std::abs(I(a, b) - ref) < 1e-4 * scale, to_string(truth.kind), " (", a, ",", b, ")");
      }
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == 0.0);
  for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.7, 0.999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("asymptotic intervals") {
  const auto data = simulate(kWeibull, 400, 77);
  const FitResult fit = fit_mle(data, BaselineKind::Weibull);
  const auto ci = asymptotic_ci(fit, data, 0.95);
  const auto theta = fit.params_hat->theta();
  const auto info = observed_fisher(*fit.params_hat, data);
  const Eigen::Matrix4d cov = info.inverse();
  for (int j = 0; j < 4; ++j) {
    REQUIRE(ci.intervals[j].has_value());
    CHECK(ci.intervals[j]->lower < ci.intervals[j]->upper);
    CHECK(ci.intervals[j]->contains(theta[j]));
    CHECK(ci.variances[j] == doctest::Approx(cov(j, j)).epsilon(1e-8));
    CHECK(ci.intervals[j]->length() == doctest::Approx(2 * 1.959963984540054 * std::sqrt(cov(j, j))).epsilon(1e-8));
  }
  CHECK(ci.method == CiMethod::Asymptotic);
  FitResult none;
  CHECK_THROWS_AS(asymptotic_ci(none, data), EstimationError);
  CHECK_THROWS_AS(asymptotic_ci(fit, data, 1.0), DomainError);
}

TEST_CASE("bootstrap ranks") {
  CHECK(bootstrap_ranks(4, 0.5) == std::pair{1, 3});
  CHECK(bootstrap_ranks(500, 0.95) == std::pair{13, 488});
  CHECK(bootstrap_ranks(1000, 0.95) == std::pair{25, 975});
  CHECK(bootstrap_ranks(1, 0.95) == std::pair{1, 1});
  CHECK(bootstrap_ranks(10, 0.9) == std::pair{1, 10});
}

TEST_CASE("bootstrap intervals are the documented order statistics") {
  const auto data = simulate(kLomax, 150, 3, 0.2);
  const FitResult fit = fit_mle(data, BaselineKind::Lomax);
  REQUIRE(fit.status == FitStatus::Converged);
  const std::uint64_t seed = 909;
  const auto ci = bootstrap_ci(fit, data, 4, 0.5, seed);
  std::array<std::vector<double>, 4> cols;
  for (std::uint64_t b = 0; b < 4; ++b) {
    rng::Engine eng = rng::make_engine(rng::derive_seed(seed, {b}));
    const auto re = from_bivariate(sample(*fit.params_hat, data.size(), eng), data.censoring_time());
    const auto theta = fit_mle(re, BaselineKind::Lomax).params_hat->theta();
    for (int j = 0; j < 4; ++j) cols[j].push_back(theta[j]);
  }
  for (int j = 0; j < 4; ++j) {
    std::sort(cols[j].begin(), cols[j].end());
    CHECK(ci.intervals[j]->lower == cols[j][0]);
    CHECK(ci.intervals[j]->upper == cols[j][2]);
  }
  CHECK(ci.B == 4);
  CHECK(ci.seed == seed);
  CHECK(ci.failed_resamples == 0);
}

TEST_CASE("bootstrap is reproducible and independent of the worker count") {
  const auto data = simulate(kGompertz, 120, 14);
  const FitResult fit = fit_mle(data, BaselineKind::Gompertz);
  BootstrapOptions one, many;
  many.workers = 4;
  const auto a = bootstrap_ci(fit, data, 120, 0.95, 5, one);
  const auto b = bootstrap_ci(fit, data, 120, 0.95, 5, one);
  const auto c = bootstrap_ci(fit, data, 120, 0.95, 5, many);
  const auto d = bootstrap_ci(fit, data, 120, 0.95, 6, one);
  bool differs = false;
  for (int j = 0; j < 4; ++j) {
    CHECK(a.intervals[j]->lower == b.intervals[j]->lower);
    CHECK(a.intervals[j]->upper == c.intervals[j]->upper);
    CHECK(a.intervals[j]->lower == c.intervals[j]->lower);
    CHECK(a.intervals[j]->lower < a.intervals[j]->upper);
    differs = differs || a.intervals[j]->lower != d.intervals[j]->lower;
  }
  CHECK(differs);
  CHECK_THROWS_AS(bootstrap_ci(fit, data, 0, 0.95, 1), DomainError);
}

TEST_CASE("brent maximizer on a known function") {
  auto f = [](double x) { return -(x - 2.0) * (x - 2.0) + std::sin(x) * 1e-3; };
  const auto r = optimize::brent_maximize(f, 0.0, 1.0, f(1.0), 5.0, 1e-10, 1e-12, 200);
  CHECK(r.converged);
  CHECK(r.x == doctest::Approx(2.0 + 1e-3 * std::cos(2.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("profile evaluation does not depend on the kernel backend") {
  using namespace bvf::kernels;
  if (!backend_available(Backend::Avx2)) return;
  for (const auto& truth : kCaptionParams) {
    const auto data = simulate(truth, 1000, 44, 0.3);
    std::vector<double> t;
    for (const auto& r : data.records())
      if (r.delta != FailureMode::Censored) t.push_back(r.t);
    for (double lam : {0.3, truth.lambda, 3.0}) {
      std::vector<double> x = t;
      if (truth.kind == BaselineKind::Weibull)
        for (auto& v : x) v = std::log(v);
      auto sum = [&](const KernelTable& k) {
        switch (truth.kind) {
          case BaselineKind::Weibull:
            return k.sum_exp_scaled(x, lam);
          case BaselineKind::Gompertz:
            return k.sum_expm1_scaled(x, lam);
          case BaselineKind::Lomax:
            return k.sum_log1p_scaled(x, lam);
        }
        return 0.0;
      };
      CHECK(sum(table(Backend::Avx2)) == doctest::Approx(sum(table(Backend::Scalar))).epsilon(1e-13));
    }
  }
}
