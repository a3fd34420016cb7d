#pragma once

#include <span>
#include <string_view>

// Reduction kernels behind the profile log-likelihood. Each baseline's
// sum of log S0 over the failure times is one of
//   Weibull   sum exp(lambda * log t)
//   Gompertz  sum expm1(lambda * t)
//   Lomax     sum log1p(lambda * t)
// The scalar backend is the reference (libm); the AVX2 backend evaluates
// four lanes at a time with its own exp/expm1/log1p and is selected at
// runtime when the CPU supports AVX2 and FMA. BVF_SIMD=scalar in the
// environment forces the reference backend.
namespace bvf::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);

bool backend_available(Backend backend);

// Backend used by the un-tagged overloads; fixed at first use.
Backend active_backend();

struct KernelTable {
  double (*sum_exp_scaled)(std::span<const double> x, double scale);
  double (*sum_expm1_scaled)(std::span<const double> x, double scale);
  double (*sum_log1p_scaled)(std::span<const double> x, double scale);
  // Elementwise forms: out[i] = f(scale * x[i]). out.size() must equal x.size().
  void (*exp_scaled)(std::span<const double> x, double scale, std::span<double> out);
  void (*expm1_scaled)(std::span<const double> x, double scale, std::span<double> out);
  void (*log1p_scaled)(std::span<const double> x, double scale, std::span<double> out);
};

// Throws std::runtime_error if the backend is not available on this CPU.
const KernelTable& table(Backend backend);
const KernelTable& active_table();

inline double sum_exp_scaled(std::span<const double> x, double scale) {
  return active_table().sum_exp_scaled(x, scale);
}
inline double sum_expm1_scaled(std::span<const double> x, double scale) {
  return active_table().sum_expm1_scaled(x, scale);
}
// Inputs scale * x[i] must be >= 0 (the Lomax argument lambda * t).
inline double sum_log1p_scaled(std::span<const double> x, double scale) {
  return active_table().sum_log1p_scaled(x, scale);
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(BVF_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace bvf::kernels
