#pragma once

namespace bvf {

// Standard normal quantile: Acklam's rational approximation refined by one
// Halley step against erfc. Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace bvf
