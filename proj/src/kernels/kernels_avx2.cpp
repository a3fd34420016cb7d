// AVX2 + FMA kernels. Every function touching 256-bit registers carries the
// target attribute so the rest of the binary keeps the baseline ISA; the
// dispatcher only hands this table out after a cpuid check.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>
#include <span>

#include "bvf/kernels.hpp"

#define BVF_AVX2 __attribute__((target("avx2,fma"), always_inline)) inline

namespace bvf::kernels::detail {
namespace {

constexpr double kLog2e = 1.4426950408889634;
// Cody-Waite split of ln 2: the high part has trailing zero bits so k * kLn2Hi is exact.
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kExpOverflow = 709.78;
constexpr double kExpUnderflow = -708.0;
constexpr double kSqrt2 = 1.41421356237309504880;

BVF_AVX2 __m256d pow2_of_integral(__m256d k) {
  // k + 1.5 * 2^52 leaves k, in two's complement, in the low mantissa bits.
  const __m256d magic = _mm256_set1_pd(0x1.8p52);
  __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)), _mm256_castpd_si256(magic));
  ki = _mm256_add_epi64(ki, _mm256_set1_epi64x(1023));
  return _mm256_castsi256_pd(_mm256_slli_epi64(ki, 52));
}

// e^r - 1 on |r| <= ln2 / 2, Taylor series through r^13.
BVF_AVX2 __m256d expm1_reduced(__m256d r) {
  __m256d q = _mm256_set1_pd(1.0 / 6227020800.0);
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 479001600.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 39916800.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 3628800.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 362880.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 40320.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 5040.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 720.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 120.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 24.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(1.0 / 6.0));
  q = _mm256_fmadd_pd(q, r, _mm256_set1_pd(0.5));
  return _mm256_fmadd_pd(_mm256_mul_pd(r, r), q, r);
}

struct ExpParts {
  __m256d two_k;  // 2^k, inf when k == 1024
  __m256d half_two_k;
  __m256d em1r;  // e^r - 1
};

// x = k ln2 + r with the argument clamped to the finite range.
BVF_AVX2 ExpParts exp_reduce(__m256d x) {
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(kExpUnderflow)),
                                   _mm256_set1_pd(kExpOverflow));
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), xc);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);
  ExpParts parts;
  // k - 1 stays in [-1022, 1023] over the clamped range.
  parts.half_two_k = pow2_of_integral(_mm256_sub_pd(k, _mm256_set1_pd(1.0)));
  parts.two_k = _mm256_add_pd(parts.half_two_k, parts.half_two_k);
  parts.em1r = expm1_reduced(r);
  return parts;
}

BVF_AVX2 __m256d exp_pd(__m256d x) {
  const ExpParts p = exp_reduce(x);
  const __m256d one_plus = _mm256_add_pd(_mm256_set1_pd(1.0), p.em1r);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p.half_two_k, one_plus), _mm256_set1_pd(2.0));
  y = _mm256_blendv_pd(y, _mm256_set1_pd(__builtin_inf()),
                       _mm256_cmp_pd(x, _mm256_set1_pd(kExpOverflow), _CMP_GT_OQ));
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(),
                       _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ));
  return y;
}

BVF_AVX2 __m256d expm1_pd(__m256d x) {
  const ExpParts p = exp_reduce(x);
  // 2^k (e^r - 1) + (2^k - 1); exact e^r - 1 when k == 0.
  __m256d y = _mm256_fmadd_pd(p.two_k, p.em1r, _mm256_sub_pd(p.two_k, _mm256_set1_pd(1.0)));
  // Near overflow expm1 == exp to working precision and 2^k itself may be inf.
  const __m256d near_overflow = _mm256_cmp_pd(x, _mm256_set1_pd(709.0), _CMP_GT_OQ);
  if (_mm256_movemask_pd(near_overflow) != 0) y = _mm256_blendv_pd(y, exp_pd(x), near_overflow);
  y = _mm256_blendv_pd(y, _mm256_set1_pd(-1.0),
                       _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ));
  return y;
}

// log1p for x >= 0 (including +inf).
BVF_AVX2 __m256d log1p_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, x);
  // Rounding correction log(1 + x) - log(u) ~ c / u. u - 1 is exact for u < 2
  // and u - x is exact for u >= 2.
  const __m256d c_small = _mm256_sub_pd(x, _mm256_sub_pd(u, one));
  const __m256d c_large = _mm256_sub_pd(one, _mm256_sub_pd(u, x));
  const __m256d u_ge_2 = _mm256_cmp_pd(u, _mm256_set1_pd(2.0), _CMP_GE_OQ);
  const __m256d c = _mm256_div_pd(_mm256_blendv_pd(c_small, c_large, u_ge_2), u);

  const __m256i bits = _mm256_castpd_si256(u);
  __m256i biased_exp = _mm256_srli_epi64(bits, 52);
  const __m256i mant = _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(mant, _mm256_set1_epi64x(0x3FF0000000000000LL)));
  // Centre the mantissa on 1: m in [sqrt(2)/2, sqrt(2)].
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  biased_exp = _mm256_add_epi64(biased_exp, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));
  const __m256d two52 = _mm256_set1_pd(0x1p52);
  const __m256d e = _mm256_sub_pd(
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased_exp, _mm256_castpd_si256(two52))), two52),
      _mm256_set1_pd(1023.0));

  // log m = 2 atanh(s), s = (m - 1) / (m + 1), |s| <= 0.1716.
  const __m256d f = _mm256_sub_pd(m, one);
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d q = _mm256_set1_pd(1.0 / 25.0);
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 23.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 21.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 19.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 17.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 15.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 13.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 11.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 9.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 7.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 5.0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(1.0 / 3.0));
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_s, z), q, two_s);

  const __m256d low = _mm256_add_pd(log_m, _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), c));
  __m256d y = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), low);
  y = _mm256_blendv_pd(y, u, _mm256_cmp_pd(u, _mm256_set1_pd(__builtin_inf()), _CMP_EQ_OQ));
  return y;
}

BVF_AVX2 __m256d tail_mask(std::size_t remaining) {
  const __m256i lane = _mm256_set_epi64x(3, 2, 1, 0);
  return _mm256_castsi256_pd(
      _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(remaining)), lane));
}

BVF_AVX2 double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

enum class Op { Exp, Expm1, Log1p };

template <Op op>
BVF_AVX2 __m256d apply(__m256d v) {
  if constexpr (op == Op::Exp) return exp_pd(v);
  if constexpr (op == Op::Expm1) return expm1_pd(v);
  return log1p_pd(v);
}

template <Op op>
__attribute__((target("avx2,fma"))) double reduce(const double* x, std::size_t n, double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, apply<op>(_mm256_mul_pd(_mm256_loadu_pd(x + i), s)));
    acc1 = _mm256_add_pd(acc1, apply<op>(_mm256_mul_pd(_mm256_loadu_pd(x + i + 4), s)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, apply<op>(_mm256_mul_pd(_mm256_loadu_pd(x + i), s)));
  if (i < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; i + j < n; ++j) buf[j] = x[i + j];
    const __m256d v = apply<op>(_mm256_mul_pd(_mm256_load_pd(buf), s));
    acc1 = _mm256_add_pd(acc1, _mm256_and_pd(v, tail_mask(n - i)));
  }
  return horizontal_sum(_mm256_add_pd(acc0, acc1));
}

template <Op op>
__attribute__((target("avx2,fma"))) void map(const double* x, std::size_t n, double scale, double* out) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, apply<op>(_mm256_mul_pd(_mm256_loadu_pd(x + i), s)));
  if (i < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; i + j < n; ++j) buf[j] = x[i + j];
    _mm256_store_pd(buf, apply<op>(_mm256_mul_pd(_mm256_load_pd(buf), s)));
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] = buf[j];
  }
}

double sum_exp(std::span<const double> x, double scale) { return reduce<Op::Exp>(x.data(), x.size(), scale); }
double sum_expm1(std::span<const double> x, double scale) {
  return reduce<Op::Expm1>(x.data(), x.size(), scale);
}
double sum_log1p(std::span<const double> x, double scale) {
  return reduce<Op::Log1p>(x.data(), x.size(), scale);
}
void map_exp(std::span<const double> x, double scale, std::span<double> out) {
  map<Op::Exp>(x.data(), x.size(), scale, out.data());
}
void map_expm1(std::span<const double> x, double scale, std::span<double> out) {
  map<Op::Expm1>(x.data(), x.size(), scale, out.data());
}
void map_log1p(std::span<const double> x, double scale, std::span<double> out) {
  map<Op::Log1p>(x.data(), x.size(), scale, out.data());
}

}  // namespace

const KernelTable kAvx2Table{sum_exp, sum_expm1, sum_log1p, map_exp, map_expm1, map_log1p};

}  // namespace bvf::kernels::detail
