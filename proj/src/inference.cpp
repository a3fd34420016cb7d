#include "bvf/inference.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "bvf/error.hpp"
#include "bvf/kernels.hpp"
#include "bvf/log.hpp"
#include "bvf/normal.hpp"
#include "bvf/optimize.hpp"
#include "bvf/parallel.hpp"

namespace bvf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
}

// m log alpha with 0 log 0 = 0.
double count_log_alpha(std::size_t m, double alpha) {
  if (m == 0) return 0.0;
  return static_cast<double>(m) * std::log(alpha);
}

}  // namespace

ProfileContext::ProfileContext(const CompetingRisksData& data, BaselineKind kind)
    : kind_(kind), counts_(data.counts()), censoring_time_(data.censoring_time()) {
  failure_times_.reserve(data.failures());
  for (const auto& r : data.records()) {
    if (r.delta == FailureMode::Censored) continue;
    failure_times_.push_back(r.t);
    sum_failure_times_ += r.t;
  }
  if (kind_ == BaselineKind::Weibull) {
    log_failure_times_.reserve(failure_times_.size());
    for (double t : failure_times_) {
      log_failure_times_.push_back(std::log(t));
      sum_log_failure_times_ += log_failure_times_.back();
    }
  }
}

BaselineSums ProfileContext::sums(double lambda) const {
  check_lambda(lambda);
  const double m_fail = static_cast<double>(failures());
  const double m_cens = static_cast<double>(counts_[3]);
  const double c = censoring_time_.value_or(0.0);
  double cumulative = 0.0;  // -sum log S0
  double log_h = 0.0;
  switch (kind_) {
    case BaselineKind::Weibull:
      cumulative = kernels::sum_exp_scaled(log_failure_times_, lambda);
      if (m_cens > 0) cumulative += m_cens * std::pow(c, lambda);
      log_h = (m_fail > 0 ? m_fail * std::log(lambda) : 0.0) + (lambda - 1.0) * sum_log_failure_times_;
      break;
    case BaselineKind::Gompertz:
      cumulative = kernels::sum_expm1_scaled(failure_times_, lambda);
      if (m_cens > 0) cumulative += m_cens * std::expm1(lambda * c);
      log_h = (m_fail > 0 ? m_fail * std::log(lambda) : 0.0) + lambda * sum_failure_times_;
      break;
    case BaselineKind::Lomax: {
      const double s = kernels::sum_log1p_scaled(failure_times_, lambda);
      cumulative = s;
      if (m_cens > 0) cumulative += m_cens * std::log1p(lambda * c);
      log_h = (m_fail > 0 ? m_fail * std::log(lambda) : 0.0) - s;
      break;
    }
  }
  return {-cumulative, log_h};
}

double ProfileContext::profile(double lambda) const {
  const std::size_t m = failures();
  if (m == 0) throw EstimationError("no failures observed");
  const BaselineSums s = sums(lambda);
  const double cumulative = -s.sum_log_s0;
  if (!(cumulative > 0.0) || !std::isfinite(cumulative)) return kNegInf;
  const double value = -static_cast<double>(m) * std::log(cumulative) + s.sum_log_h0;
  return std::isnan(value) ? kNegInf : value;
}

std::array<double, 3> ProfileContext::alphas(double lambda) const {
  const double cumulative = -sums(lambda).sum_log_s0;
  if (!(cumulative > 0.0)) throw EstimationError("degenerate data: sum of log S0 is zero");
  return {static_cast<double>(counts_[0]) / cumulative, static_cast<double>(counts_[1]) / cumulative,
          static_cast<double>(counts_[2]) / cumulative};
}

double log_likelihood(const BvfParams& p, const CompetingRisksData& data) {
  check_lambda(p.lambda);
  for (int k = 0; k < 3; ++k) {
    if (!(p.alpha(k) >= 0.0) || !std::isfinite(p.alpha(k)))
      throw DomainError("alpha parameters must be non-negative and finite");
  }
  const ProfileContext ctx(data, p.kind);
  const BaselineSums s = ctx.sums(p.lambda);
  const auto& m = data.counts();
  double ll = 0.0;
  for (int k = 0; k < 3; ++k) ll += count_log_alpha(m[k], p.alpha(k));
  return ll + p.alpha_sum() * s.sum_log_s0 + s.sum_log_h0;
}

std::array<double, 3> alphas_given_lambda(double lambda, const CompetingRisksData& data, BaselineKind kind) {
  return ProfileContext(data, kind).alphas(lambda);
}

double profile_loglik(double lambda, const CompetingRisksData& data, BaselineKind kind) {
  return ProfileContext(data, kind).profile(lambda);
}

double profile_constant(const CompetingRisksData& data) {
  double c = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double m = static_cast<double>(data.counts()[k]);
    if (m > 0) c += m * std::log(m);
  }
  return c - static_cast<double>(data.failures());
}

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::Converged:
      return "Converged";
    case FitStatus::NoMleMonotoneProfile:
      return "NoMleMonotoneProfile";
    case FitStatus::BoundaryAlphaZero:
      return "BoundaryAlphaZero";
  }
  return "?";
}

FitStatus parse_fit_status(std::string_view name) {
  for (FitStatus s : {FitStatus::Converged, FitStatus::NoMleMonotoneProfile, FitStatus::BoundaryAlphaZero})
    if (to_string(s) == name) return s;
  throw ValidationError("unknown fit status '" + std::string(name) + "'");
}

FitResult fit_mle(const CompetingRisksData& data, BaselineKind kind, const FitOptions& options) {
  if (data.failures() == 0) throw EstimationError("no failures observed");
  if (!(options.lambda_min > 0.0 && options.lambda_min < options.lambda_init &&
        options.lambda_init < options.lambda_max && options.expand_factor > 1.0))
    throw DomainError("invalid lambda search bracket");

  const ProfileContext ctx(data, kind);
  FitResult result;
  result.kind = kind;

  auto eval = [&](double lambda) {
    const double v = ctx.profile(lambda);
    ++result.n_evals;
    if (options.record_trace) result.profile_trace.emplace_back(lambda, v);
    return v;
  };

  // Three-point bracket lo < mid < hi with p(mid) >= p(lo), p(hi).
  const double f = options.expand_factor;
  double mid = options.lambda_init;
  double pm = eval(mid);
  double lo = std::max(mid / f, options.lambda_min);
  double pl = eval(lo);
  double hi = std::min(mid * f, options.lambda_max);
  double ph = eval(hi);
  bool monotone = false;
  if (pm >= pl && pm >= ph) {
    // bracketed
  } else if (ph > pm && ph >= pl) {
    for (;;) {
      lo = mid, pl = pm;
      mid = hi, pm = ph;
      if (mid >= options.lambda_max) {
        monotone = true;
        break;
      }
      hi = std::min(mid * f, options.lambda_max);
      ph = eval(hi);
      if (pm >= ph) break;
    }
  } else {
    for (;;) {
      hi = mid, ph = pm;
      mid = lo, pm = pl;
      if (mid <= options.lambda_min) {
        monotone = true;
        break;
      }
      lo = std::max(mid / f, options.lambda_min);
      pl = eval(lo);
      if (pm >= pl) break;
    }
  }

  auto finish_trace = [&] {
    std::sort(result.profile_trace.begin(), result.profile_trace.end());
  };

  if (monotone) {
    result.status = FitStatus::NoMleMonotoneProfile;
    result.loglik_max = std::numeric_limits<double>::quiet_NaN();
    result.warnings.push_back(std::string("profile log-likelihood of the ") + std::string(to_string(kind)) +
                              " model is monotone over the search bracket; no MLE");
    finish_trace();
    return result;
  }
  if (!std::isfinite(pm)) throw EstimationError("profile log-likelihood is not finite on the search bracket");

  const auto brent = optimize::brent_maximize(eval, lo, mid, pm, hi, options.abs_tol, options.rel_tol,
                                              options.max_evals - result.n_evals);
  if (!brent.converged) throw EstimationError("profile maximization exceeded the evaluation budget");

  const double lambda_hat = brent.x;
  const auto alphas = ctx.alphas(lambda_hat);
  result.params_hat = BvfParams{alphas[0], alphas[1], alphas[2], lambda_hat, kind};
  result.status = FitStatus::Converged;
  for (int k = 0; k < 3; ++k) {
    if (data.counts()[k] == 0) {
      result.status = FitStatus::BoundaryAlphaZero;
      result.warnings.push_back("no records with delta = " + std::to_string(k) + "; alpha" + std::to_string(k) +
                                " estimated as 0");
    }
  }
  result.loglik_max = log_likelihood(*result.params_hat, data);
  for (const auto& w : result.warnings) log::warn(w);
  finish_trace();
  return result;
}

Eigen::MatrixXd observed_fisher(const BvfParams& p_hat, const CompetingRisksData& data,
                                const std::vector<int>& active, const HessianOptions& options) {
  const std::array<double, 4> theta = p_hat.theta();
  for (int j : active) {
    if (j < 0 || j > 3) throw DomainError("parameter index out of range");
    if (!(theta[j] > 0.0)) throw DomainError("observed information requires an interior estimate");
  }
  const int d = static_cast<int>(active.size());
  std::vector<double> h(d);
  for (int a = 0; a < d; ++a) {
    const double v = theta[active[a]];
    h[a] = std::min(options.step_scale * std::max(std::fabs(v), options.step_floor), 0.5 * v);
  }
  auto ll = [&](int a, double da, int b, double db) {
    std::array<double, 4> t = theta;
    if (a >= 0) t[active[a]] += da;
    if (b >= 0) t[active[b]] += db;
    return log_likelihood(BvfParams::from_theta(p_hat.kind, t), data);
  };

  const double f0 = ll(-1, 0.0, -1, 0.0);
  Eigen::MatrixXd hess(d, d);
  for (int a = 0; a < d; ++a) {
    hess(a, a) = (ll(a, h[a], -1, 0.0) - 2.0 * f0 + ll(a, -h[a], -1, 0.0)) / (h[a] * h[a]);
    for (int b = a + 1; b < d; ++b) {
      const double v = (ll(a, h[a], b, h[b]) - ll(a, h[a], b, -h[b]) - ll(a, -h[a], b, h[b]) +
                        ll(a, -h[a], b, -h[b])) /
                       (4.0 * h[a] * h[b]);
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
  Eigen::MatrixXd info = -hess;
  return 0.5 * (info + info.transpose());
}

Eigen::Matrix4d observed_fisher(const BvfParams& p_hat, const CompetingRisksData& data,
                                const HessianOptions& options) {
  return observed_fisher(p_hat, data, {0, 1, 2, 3}, options);
}

std::string_view to_string(CiMethod method) {
  return method == CiMethod::Asymptotic ? "asymptotic" : "bootstrap";
}

ConfidenceIntervalSet asymptotic_ci(const FitResult& fit, const CompetingRisksData& data, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (!fit.has_estimate()) throw EstimationError("no estimate available for confidence intervals");
  const BvfParams& p = *fit.params_hat;

  std::vector<int> active;
  for (int j = 0; j < 4; ++j)
    if (p.theta()[j] > 0.0) active.push_back(j);

  const Eigen::MatrixXd info = observed_fisher(p, data, active);
  const Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) throw SingularMatrixError("observed information is not positive definite");
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));

  ConfidenceIntervalSet out;
  out.level = level;
  out.method = CiMethod::Asymptotic;
  out.point = p;
  out.variances.fill(std::numeric_limits<double>::quiet_NaN());
  const double z = normal_quantile(1.0 - 0.5 * (1.0 - level));
  const auto theta = p.theta();
  for (std::size_t a = 0; a < active.size(); ++a) {
    const int j = active[a];
    const double var = cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
    if (!(var > 0.0)) throw SingularMatrixError("non-positive asymptotic variance");
    out.variances[j] = var;
    const double half = z * std::sqrt(var);
    out.intervals[j] = Interval{theta[j] - half, theta[j] + half};
  }
  return out;
}

std::pair<int, int> bootstrap_ranks(int B, double level) {
  if (B < 1) throw DomainError("bootstrap size must be positive");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  const double a = 1.0 - level;
  // The guard absorbs representation error in a (1 - 0.95 is slightly above 0.05).
  constexpr double kGuard = 1e-9;
  auto rank = [&](double x) { return std::clamp(static_cast<int>(std::ceil(x - kGuard)), 1, B); };
  return {rank(B * a / 2.0), rank(B * (1.0 - a / 2.0))};
}

ConfidenceIntervalSet bootstrap_ci(const FitResult& fit, const CompetingRisksData& data, int B, double level,
                                   std::uint64_t seed, const BootstrapOptions& options) {
  if (B < 1) throw DomainError("bootstrap size must be positive");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (!fit.has_estimate()) throw EstimationError("no estimate available for confidence intervals");
  const BvfParams& theta_hat = *fit.params_hat;
  if (fit.status == FitStatus::BoundaryAlphaZero)
    throw EstimationError("parametric bootstrap requires all alpha estimates to be positive");
  theta_hat.validate();

  const std::size_t n = data.size();
  const std::optional<double> c = data.censoring_time();
  std::vector<std::optional<std::array<double, 4>>> estimates(static_cast<std::size_t>(B));
  parallel_for(estimates.size(), options.workers, [&](std::size_t b) {
    rng::Engine engine = rng::make_engine(rng::derive_seed(seed, {b}));
    const auto pairs = sample(theta_hat, n, engine);
    const CompetingRisksData resample = from_bivariate(pairs, c);
    if (resample.failures() == 0) return;
    try {
      const FitResult r = fit_mle(resample, theta_hat.kind, options.fit);
      if (r.has_estimate()) estimates[b] = r.params_hat->theta();
    } catch (const EstimationError&) {
    }
  });

  std::array<std::vector<double>, 4> columns;
  int failed = 0;
  for (const auto& e : estimates) {
    if (!e) {
      ++failed;
      continue;
    }
    for (int j = 0; j < 4; ++j) columns[j].push_back((*e)[j]);
  }
  if (failed > options.max_failure_fraction * B)
    throw EstimationError(std::to_string(failed) + " of " + std::to_string(B) +
                          " bootstrap resamples failed to produce an estimate");

  ConfidenceIntervalSet out;
  out.level = level;
  out.method = CiMethod::Bootstrap;
  out.point = theta_hat;
  out.variances.fill(std::numeric_limits<double>::quiet_NaN());
  out.B = B;
  out.failed_resamples = failed;
  out.seed = seed;
  const int effective = B - failed;
  const auto [lo_rank, hi_rank] = bootstrap_ranks(effective, level);
  for (int j = 0; j < 4; ++j) {
    auto& col = columns[j];
    std::sort(col.begin(), col.end());
    out.intervals[j] = Interval{col[lo_rank - 1], col[hi_rank - 1]};
  }
  return out;
}

}  // namespace bvf
