#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvf/data.hpp"
#include "bvf/model.hpp"

namespace bvf {

// Baseline-dependent sums of the log-likelihood at a fixed lambda:
//   sum_log_s0 = sum over all n records of log S0(t_i)   (< 0)
//   sum_log_h0 = sum over uncensored records of log h0(t_i)
struct BaselineSums {
  double sum_log_s0;
  double sum_log_h0;
};

// Columnar view of a data set for repeated evaluation at different lambda.
// Censored records all share C, so they enter as m3 * f(C).
class ProfileContext {
 public:
  ProfileContext(const CompetingRisksData& data, BaselineKind kind);

  BaselineSums sums(double lambda) const;
  BaselineKind kind() const { return kind_; }
  const std::array<std::size_t, 4>& counts() const { return counts_; }
  std::size_t failures() const { return counts_[0] + counts_[1] + counts_[2]; }

  // -(M) log(-sum log S0) + sum log h0 with M = m0 + m1 + m2; -inf where the
  // sums overflow.
  double profile(double lambda) const;
  std::array<double, 3> alphas(double lambda) const;

 private:
  BaselineKind kind_;
  std::array<std::size_t, 4> counts_;
  std::optional<double> censoring_time_;
  std::vector<double> failure_times_;
  std::vector<double> log_failure_times_;
  double sum_failure_times_ = 0.0;
  double sum_log_failure_times_ = 0.0;
};

// Log-likelihood without its additive constant:
//   sum_k m_k log alpha_k + (sum alpha) sum_i log S0(t_i) + sum_{uncensored} log h0(t_i).
// alpha_k = 0 is accepted with the convention 0 log 0 = 0 (boundary estimates);
// lambda and the alphas otherwise follow BvfParams::validate.
double log_likelihood(const BvfParams& p, const CompetingRisksData& data);

// Closed-form maximizers alpha_k = -m_k / sum log S0(t_i; lambda).
std::array<double, 3> alphas_given_lambda(double lambda, const CompetingRisksData& data, BaselineKind kind);

// Profile log-likelihood p(lambda). Requires m0 + m1 + m2 >= 1.
double profile_loglik(double lambda, const CompetingRisksData& data, BaselineKind kind);

// sum m_k log m_k - (m0 + m1 + m2): the gap log_likelihood(alphas(lambda), lambda) - p(lambda).
double profile_constant(const CompetingRisksData& data);

enum class FitStatus { Converged, NoMleMonotoneProfile, BoundaryAlphaZero };

std::string_view to_string(FitStatus status);
FitStatus parse_fit_status(std::string_view name);

struct FitOptions {
  double lambda_init = 1.0;
  double expand_factor = 4.0;
  double lambda_min = 1e-8;
  double lambda_max = 1e8;
  double abs_tol = 1e-8;
  double rel_tol = 1e-10;
  int max_evals = 500;
  bool record_trace = false;
};

struct FitResult {
  BaselineKind kind = BaselineKind::Weibull;
  FitStatus status = FitStatus::NoMleMonotoneProfile;
  // Absent for NoMleMonotoneProfile; alpha_k == 0 exactly under BoundaryAlphaZero.
  std::optional<BvfParams> params_hat;
  // log_likelihood(params_hat, data); NaN when params_hat is absent.
  double loglik_max = 0.0;
  // Every profile evaluation (lambda, p(lambda)), sorted by lambda, when requested.
  std::vector<std::pair<double, double>> profile_trace;
  int n_evals = 0;
  std::vector<std::string> warnings;

  bool has_estimate() const { return params_hat.has_value(); }
};

// Maximizes the profile log-likelihood: geometric bracket expansion from
// lambda_init, then Brent. Throws EstimationError("no failures observed")
// when every record is censored.
FitResult fit_mle(const CompetingRisksData& data, BaselineKind kind, const FitOptions& options = {});

struct HessianOptions {
  // Relative step h_j = step_scale * max(|theta_j|, step_floor).
  double step_scale = 1.220703125e-4;  // eps^(1/4)
  double step_floor = 1e-3;
};

// Observed information -Hessian of log_likelihood in the order
// (alpha0, alpha1, alpha2, lambda), by central differences, symmetrized.
Eigen::Matrix4d observed_fisher(const BvfParams& p_hat, const CompetingRisksData& data,
                                const HessianOptions& options = {});

// Same, restricted to the listed parameter indices (0..3); used when some
// alpha_k sits on the boundary.
Eigen::MatrixXd observed_fisher(const BvfParams& p_hat, const CompetingRisksData& data,
                                const std::vector<int>& active, const HessianOptions& options = {});

enum class CiMethod { Asymptotic, Bootstrap };

std::string_view to_string(CiMethod method);

struct Interval {
  double lower;
  double upper;
  bool contains(double v) const { return lower <= v && v <= upper; }
  double length() const { return upper - lower; }
};

struct ConfidenceIntervalSet {
  double level = 0.95;
  CiMethod method = CiMethod::Asymptotic;
  BvfParams point;  // estimate the intervals belong to
  // Keyed by kParamNames; empty for a suppressed component.
  std::array<std::optional<Interval>, 4> intervals;
  // Asymptotic: diagonal of the inverse observed information (NaN if suppressed).
  std::array<double, 4> variances{};
  // Bootstrap only.
  int B = 0;
  int failed_resamples = 0;
  std::uint64_t seed = 0;
};

// theta_j +/- z sqrt([I^-1]_jj). Bounds are not truncated at zero.
// Throws EstimationError if the fit has no estimate, SingularMatrixError if
// the information matrix is not positive definite.
ConfidenceIntervalSet asymptotic_ci(const FitResult& fit, const CompetingRisksData& data, double level = 0.95);

// 1-based percentile ranks ceil(B a / 2) and ceil(B (1 - a / 2)), a = 1 - level,
// clamped to [1, B].
std::pair<int, int> bootstrap_ranks(int B, double level);

struct BootstrapOptions {
  int workers = 1;
  FitOptions fit;
  // Resample failures tolerated before giving up, as a fraction of B.
  double max_failure_fraction = 0.05;
};

// Parametric percentile bootstrap: B resamples of size n from the fitted
// model (reusing the data's censoring time), each refitted. Resample b uses
// the stream derive_seed(seed, {b}).
ConfidenceIntervalSet bootstrap_ci(const FitResult& fit, const CompetingRisksData& data, int B, double level,
                                   std::uint64_t seed, const BootstrapOptions& options = {});

}  // namespace bvf
