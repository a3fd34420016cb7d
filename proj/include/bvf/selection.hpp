#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bvf/inference.hpp"

namespace bvf {

enum class Criterion { MaxLoglik, Aic };

std::string_view to_string(Criterion criterion);
Criterion parse_criterion(std::string_view name);

// Every family member has four free parameters.
inline constexpr int kModelDimension = 4;

struct RankedFit {
  BaselineKind kind;
  FitResult fit;
  double aic;  // -2 loglik + 2 k
};

struct SelectionResult {
  std::vector<RankedFit> ranked;  // best first
  BaselineKind chosen;
  Criterion criterion;
  std::vector<std::pair<BaselineKind, std::string>> excluded;
};

// Fits every candidate and ranks by maximized log-likelihood (or AIC).
// Only NoMleMonotoneProfile fits are excluded; boundary fits are ranked.
// Exact ties resolve in the order Weibull, Gompertz, Lomax.
// Throws ValidationError on an empty or repeated candidate list and
// EstimationError when no candidate can be fitted.
SelectionResult select_model(const CompetingRisksData& data, std::span<const BaselineKind> candidates,
                             Criterion criterion = Criterion::MaxLoglik, const FitOptions& options = {});

}  // namespace bvf
