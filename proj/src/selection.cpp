#include "bvf/selection.hpp"

#include <algorithm>

#include "bvf/error.hpp"

namespace bvf {

std::string_view to_string(Criterion criterion) {
  return criterion == Criterion::MaxLoglik ? "MaxLoglik" : "AIC";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "MaxLoglik" || name == "maxloglik" || name == "loglik") return Criterion::MaxLoglik;
  if (name == "AIC" || name == "aic") return Criterion::Aic;
  throw ValidationError("unknown selection criterion '" + std::string(name) + "'");
}

SelectionResult select_model(const CompetingRisksData& data, std::span<const BaselineKind> candidates,
                             Criterion criterion, const FitOptions& options) {
  if (candidates.empty()) throw ValidationError("candidate set is empty");
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      if (candidates[i] == candidates[j]) throw ValidationError("candidate models must be distinct");

  SelectionResult out;
  out.criterion = criterion;
  for (BaselineKind kind : candidates) {
    FitResult fit = fit_mle(data, kind, options);
    if (fit.status == FitStatus::NoMleMonotoneProfile) {
      out.excluded.emplace_back(kind, "NoMleMonotoneProfile");
      continue;
    }
    const double aic = -2.0 * fit.loglik_max + 2.0 * kModelDimension;
    out.ranked.push_back({kind, std::move(fit), aic});
  }
  if (out.ranked.empty()) throw EstimationError("no candidate model could be fitted");

  auto better = [criterion](const RankedFit& a, const RankedFit& b) {
    const double sa = criterion == Criterion::Aic ? -a.aic : a.fit.loglik_max;
    const double sb = criterion == Criterion::Aic ? -b.aic : b.fit.loglik_max;
    if (sa != sb) return sa > sb;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  };
  std::stable_sort(out.ranked.begin(), out.ranked.end(), better);
  out.chosen = out.ranked.front().kind;
  return out;
}

}  // namespace bvf
