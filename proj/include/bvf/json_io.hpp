#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "bvf/inference.hpp"
#include "bvf/selection.hpp"
#include "bvf/simulation.hpp"

namespace bvf {

using Json = nlohmann::ordered_json;

// {kind, alpha0, alpha1, alpha2, lambda, loglik, status}; parameters and
// loglik are null without an estimate.
Json to_json(const FitResult& fit);
// Restores kind, status, params_hat and loglik_max. Throws ValidationError
// on a malformed document.
FitResult fit_from_json(const Json& j);

// {kind, alpha0, alpha1, alpha2, lambda, method, level, intervals{param: [lo, hi] | null}}
// plus B, failed_resamples and seed for the bootstrap.
Json to_json(const ConfidenceIntervalSet& ci);
ConfidenceIntervalSet ci_from_json(const Json& j);

// {chosen, criterion, table: [{kind, loglik, aic, params | null, status}]}
Json to_json(const SelectionResult& sel);

Json to_json(const EstimationStudyReport& report);
Json to_json(std::span<const SelectionStudyRow> rows);

// One row per parameter: relative MSE and bias, then length and coverage for
// each interval method.
void write_estimation_csv(const EstimationStudyReport& report, std::ostream& out);
// One row per n, one probability column per candidate, then the drop count.
void write_selection_csv(std::span<const SelectionStudyRow> rows, std::ostream& out);

}  // namespace bvf
