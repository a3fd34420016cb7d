#include "bvf/baselines.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "bvf/error.hpp"

namespace bvf {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Weibull:
      return "Weibull";
    case BaselineKind::Gompertz:
      return "Gompertz";
    case BaselineKind::Lomax:
      return "Lomax";
  }
  return "?";
}

BaselineKind parse_baseline_kind(std::string_view name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "weibull") return BaselineKind::Weibull;
  if (lower == "gompertz") return BaselineKind::Gompertz;
  if (lower == "lomax") return BaselineKind::Lomax;
  throw ValidationError("unknown baseline kind '" + std::string(name) +
                        "' (expected weibull, gompertz or lomax)");
}

namespace baseline {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("baseline parameter lambda must be positive and finite");
}

void check_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
}

void check_density_args(BaselineKind kind, double t, double lambda) {
  check_lambda(lambda);
  check_time(t);
  if (!std::isfinite(t)) throw DomainError("density requires a finite time");
  if (kind == BaselineKind::Weibull && t == 0.0 && lambda < 1.0)
    throw DomainError("Weibull density has a pole at t = 0 for lambda < 1");
}

}  // namespace

double log_s0(BaselineKind kind, double t, double lambda) {
  check_lambda(lambda);
  check_time(t);
  switch (kind) {
    case BaselineKind::Weibull:
      return -std::pow(t, lambda);
    case BaselineKind::Gompertz:
      return -std::expm1(lambda * t);
    case BaselineKind::Lomax:
      return -std::log1p(lambda * t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double s0(BaselineKind kind, double t, double lambda) { return std::exp(log_s0(kind, t, lambda)); }

double log_h0(BaselineKind kind, double t, double lambda) {
  check_density_args(kind, t, lambda);
  const double log_lambda = std::log(lambda);
  switch (kind) {
    case BaselineKind::Weibull:
      // lambda == 1 at t == 0 would give 0 * -inf.
      return lambda == 1.0 ? 0.0 : log_lambda + (lambda - 1.0) * std::log(t);
    case BaselineKind::Gompertz:
      return log_lambda + lambda * t;
    case BaselineKind::Lomax:
      return log_lambda - std::log1p(lambda * t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double h0(BaselineKind kind, double t, double lambda) { return std::exp(log_h0(kind, t, lambda)); }

double log_f0(BaselineKind kind, double t, double lambda) {
  return log_h0(kind, t, lambda) + log_s0(kind, t, lambda);
}

double f0(BaselineKind kind, double t, double lambda) { return std::exp(log_f0(kind, t, lambda)); }

double s0_inv_from_log(BaselineKind kind, double log_p, double lambda) {
  check_lambda(lambda);
  if (!(log_p <= 0.0)) throw DomainError("inverse survival requires log p <= 0");
  const double cumulative_hazard = -log_p;  // in [0, inf]
  switch (kind) {
    case BaselineKind::Weibull:
      return std::pow(cumulative_hazard, 1.0 / lambda);
    case BaselineKind::Gompertz:
      return std::log1p(cumulative_hazard) / lambda;
    case BaselineKind::Lomax:
      return std::expm1(cumulative_hazard) / lambda;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double s0_inv(BaselineKind kind, double p, double lambda) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("inverse survival requires p in (0, 1]");
  return s0_inv_from_log(kind, std::log(p), lambda);
}

}  // namespace baseline
}  // namespace bvf
