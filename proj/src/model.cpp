#include "bvf/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bvf/error.hpp"

namespace bvf {

void BvfParams::validate() const {
  for (double v : theta()) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("BVF parameters alpha0, alpha1, alpha2, lambda must be positive and finite");
  }
}

namespace {

void check_positive_time(double v, const char* name) {
  if (!(v > 0.0)) throw DomainError(std::string(name) + " must be positive");
}

}  // namespace

double joint_survival(const BvfParams& p, double x, double y) {
  p.validate();
  check_positive_time(x, "x");
  check_positive_time(y, "y");
  const double ls_x = baseline::log_s0(p.kind, x, p.lambda);
  if (x == y) return std::exp(p.alpha_sum() * ls_x);
  const double ls_y = baseline::log_s0(p.kind, y, p.lambda);
  if (x < y) return std::exp((p.alpha0 + p.alpha2) * ls_y + p.alpha1 * ls_x);
  return std::exp((p.alpha0 + p.alpha1) * ls_x + p.alpha2 * ls_y);
}

double jpdf_ac(const BvfParams& p, double x, double y) {
  p.validate();
  check_positive_time(x, "x");
  check_positive_time(y, "y");
  if (x == y) throw DomainError("jpdf_ac is undefined on the line x = y; use singular_density");
  // S0^(a - 1) f0 = S0^a h0; this grouping stays finite where S0 underflows.
  const double ls_x = baseline::log_s0(p.kind, x, p.lambda);
  const double ls_y = baseline::log_s0(p.kind, y, p.lambda);
  const double lh = baseline::log_h0(p.kind, x, p.lambda) + baseline::log_h0(p.kind, y, p.lambda);
  if (x < y) {
    const double a = p.alpha0 + p.alpha2;
    return std::exp(std::log(p.alpha1 * a) + a * ls_y + p.alpha1 * ls_x + lh);
  }
  const double a = p.alpha0 + p.alpha1;
  return std::exp(std::log(p.alpha2 * a) + p.alpha2 * ls_y + a * ls_x + lh);
}

double singular_density(const BvfParams& p, double t) {
  p.validate();
  check_positive_time(t, "t");
  return p.alpha0 * std::exp(p.alpha_sum() * baseline::log_s0(p.kind, t, p.lambda) +
                             baseline::log_h0(p.kind, t, p.lambda));
}

OrderingProbabilities tie_probability(const BvfParams& p) {
  p.validate();
  const double sum = p.alpha_sum();
  return {p.alpha1 / sum, p.alpha2 / sum, p.alpha0 / sum};
}

std::vector<BivariatePair> sample(const BvfParams& p, std::size_t n, rng::Engine& engine) {
  p.validate();
  std::vector<BivariatePair> out;
  out.reserve(n);
  const std::array<double, 3> inv_alpha{1.0 / p.alpha0, 1.0 / p.alpha1, 1.0 / p.alpha2};
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> u;
    for (int k = 0; k < 3; ++k) {
      // P(U_k > u) = S0(u)^alpha_k, so S0(U_k) = V^(1/alpha_k).
      const double log_v = std::log(rng::uniform_open(engine));
      u[k] = baseline::s0_inv_from_log(p.kind, log_v * inv_alpha[k], p.lambda);
    }
    out.emplace_back(std::min(u[0], u[1]), std::min(u[0], u[2]));
  }
  return out;
}

std::vector<BivariatePair> sample(const BvfParams& p, std::size_t n, std::uint64_t seed) {
  rng::Engine engine = rng::make_engine(seed);
  return sample(p, n, engine);
}

double censoring_threshold(const BvfParams& p, double target_censored_fraction) {
  p.validate();
  if (!(target_censored_fraction > 0.0 && target_censored_fraction < 1.0))
    throw DomainError("censored fraction must lie in (0, 1)");
  // min(X, Y) has survival S0^(alpha0 + alpha1 + alpha2).
  return baseline::s0_inv_from_log(p.kind, std::log(target_censored_fraction) / p.alpha_sum(), p.lambda);
}

}  // namespace bvf
