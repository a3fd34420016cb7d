#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bvf/baselines.hpp"
#include "bvf/rng.hpp"

namespace bvf {

// BVF(alpha0, alpha1, alpha2, lambda): X = min(U0, U1), Y = min(U0, U2) with
// independent U_i having survival S0(u; lambda)^alpha_i. alpha0 drives the
// shared shock and therefore the ties X = Y.
struct BvfParams {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double lambda = 1.0;
  BaselineKind kind = BaselineKind::Weibull;

  double alpha_sum() const { return alpha0 + alpha1 + alpha2; }
  double alpha(int k) const { return k == 0 ? alpha0 : (k == 1 ? alpha1 : alpha2); }

  // (alpha0, alpha1, alpha2, lambda)
  std::array<double, 4> theta() const { return {alpha0, alpha1, alpha2, lambda}; }
  static BvfParams from_theta(BaselineKind kind, const std::array<double, 4>& theta) {
    return {theta[0], theta[1], theta[2], theta[3], kind};
  }

  // Throws DomainError unless all four reals are strictly positive and finite.
  void validate() const;

  friend bool operator==(const BvfParams&, const BvfParams&) = default;
};

inline constexpr std::array<const char*, 4> kParamNames{"alpha0", "alpha1", "alpha2", "lambda"};

using BivariatePair = std::pair<double, double>;

// Joint survival P(X > x, Y > y) for x, y > 0.
double joint_survival(const BvfParams& p, double x, double y);

// Absolutely continuous part of the joint density, off the diagonal x != y.
double jpdf_ac(const BvfParams& p, double x, double y);

// Density of the singular component along x = y = t.
double singular_density(const BvfParams& p, double t);

struct OrderingProbabilities {
  double x_first;  // P(X < Y) = alpha1 / sum
  double y_first;  // P(Y < X) = alpha2 / sum
  double tie;      // P(X = Y) = alpha0 / sum
};

OrderingProbabilities tie_probability(const BvfParams& p);

// n draws by inverse transform of the three shocks. A tie is emitted as the
// same double in both coordinates.
std::vector<BivariatePair> sample(const BvfParams& p, std::size_t n, std::uint64_t seed);
std::vector<BivariatePair> sample(const BvfParams& p, std::size_t n, rng::Engine& engine);

// Fixed censoring time C with P(min(X, Y) > C) = target_censored_fraction.
double censoring_threshold(const BvfParams& p, double target_censored_fraction);

}  // namespace bvf
