#include <cmath>
#include <span>

#include "bvf/kernels.hpp"

namespace bvf::kernels::detail {
namespace {

double sum_exp(std::span<const double> x, double scale) {
  double acc = 0.0;
  for (double v : x) acc += std::exp(scale * v);
  return acc;
}

double sum_expm1(std::span<const double> x, double scale) {
  double acc = 0.0;
  for (double v : x) acc += std::expm1(scale * v);
  return acc;
}

double sum_log1p(std::span<const double> x, double scale) {
  double acc = 0.0;
  for (double v : x) acc += std::log1p(scale * v);
  return acc;
}

void map_exp(std::span<const double> x, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(scale * x[i]);
}

void map_expm1(std::span<const double> x, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::expm1(scale * x[i]);
}

void map_log1p(std::span<const double> x, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::log1p(scale * x[i]);
}

}  // namespace

const KernelTable kScalarTable{sum_exp, sum_expm1, sum_log1p, map_exp, map_expm1, map_log1p};

}  // namespace bvf::kernels::detail
