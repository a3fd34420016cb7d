#pragma once

#include <array>
#include <string_view>

namespace bvf {

// Baseline survival S0(t; lambda) of the Lehmann family S(t) = S0(t)^alpha.
//   Weibull   S0 = exp(-t^lambda)
//   Gompertz  S0 = exp(-(exp(lambda t) - 1))
//   Lomax     S0 = 1 / (1 + lambda t)
enum class BaselineKind { Weibull, Gompertz, Lomax };

inline constexpr std::array<BaselineKind, 3> kAllBaselineKinds{
    BaselineKind::Weibull, BaselineKind::Gompertz, BaselineKind::Lomax};

std::string_view to_string(BaselineKind kind);

// Case-insensitive; throws ValidationError for anything but the three names.
BaselineKind parse_baseline_kind(std::string_view name);

namespace baseline {

// All functions throw DomainError on lambda <= 0, t < 0 or NaN arguments.
// t = +inf is accepted by the survival functions (S0 = 0).
double s0(BaselineKind kind, double t, double lambda);
double log_s0(BaselineKind kind, double t, double lambda);

// Density f0 = -dS0/dt. t = 0 is accepted except for the Weibull pole
// (lambda < 1), which is rejected.
double f0(BaselineKind kind, double t, double lambda);
double log_f0(BaselineKind kind, double t, double lambda);

// Hazard h0 = f0 / S0, same domain rules as f0.
double h0(BaselineKind kind, double t, double lambda);
double log_h0(BaselineKind kind, double t, double lambda);

// Inverse survival: the t with S0(t) = p, p in (0, 1].
double s0_inv(BaselineKind kind, double p, double lambda);

// Inverse survival from log p, log p in [-inf, 0]. Keeps precision when
// p = V^(1/alpha) underflows.
double s0_inv_from_log(BaselineKind kind, double log_p, double lambda);

}  // namespace baseline
}  // namespace bvf
