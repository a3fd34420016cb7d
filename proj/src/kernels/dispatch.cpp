#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bvf/kernels.hpp"

namespace bvf::kernels {

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(BVF_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() {
  static const Backend chosen = [] {
    const char* env = std::getenv("BVF_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return Backend::Scalar;
    return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
  }();
  return chosen;
}

const KernelTable& table(Backend backend) {
  if (!backend_available(backend))
    throw std::runtime_error("kernel backend '" + std::string(to_string(backend)) +
                             "' is not available on this CPU");
#if defined(BVF_HAVE_AVX2_KERNELS)
  if (backend == Backend::Avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& active_table() {
  static const KernelTable& t = table(active_backend());
  return t;
}

}  // namespace bvf::kernels
