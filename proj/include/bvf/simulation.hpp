#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bvf/inference.hpp"
#include "bvf/selection.hpp"

namespace bvf {

struct RelativeMetrics {
  double relative_mse;
  double relative_bias;
};

// MSE / truth^2 and (mean - truth) / truth. Throws DomainError on truth == 0
// or an empty estimate list.
RelativeMetrics relative_metrics(std::span<const double> estimates, double truth);

struct EstimationStudyConfig {
  BvfParams true_params;
  int n = 100;
  double censored_fraction = 0.0;  // 0 = complete data
  int replications = 1000;
  double ci_level = 0.95;
  int bootstrap_B = 500;  // 0 skips the bootstrap intervals
  std::uint64_t seed = 1;
  int workers = 1;
  FitOptions fit;
  // Abort when more than this share of replications fail.
  double max_failure_fraction = 0.10;

  void validate() const;
};

struct IntervalSummary {
  double avg_length = 0.0;
  double coverage = 0.0;
  int count = 0;  // replications contributing
};

struct ParameterSummary {
  double relative_mse = 0.0;
  double relative_bias = 0.0;
  IntervalSummary asymptotic;
  IntervalSummary bootstrap;
};

struct EstimationStudyReport {
  EstimationStudyConfig config;
  std::optional<double> censoring_time;
  std::array<ParameterSummary, 4> parameters;
  int successful_replications = 0;
  int failed_replications = 0;
  double mean_censored_share = 0.0;  // realized m3 / n, over successful replications
};

// One replication: sample, censor at the fixed threshold, fit, intervals.
// Replication r draws its data from derive_seed(seed, {r, 0}) and its
// bootstrap from derive_seed(seed, {r, 1}).
EstimationStudyReport run_estimation_study(const EstimationStudyConfig& config);

struct SelectionStudyConfig {
  BvfParams parent;
  std::vector<BaselineKind> candidates;
  std::vector<int> n_grid;
  int replications = 500;
  std::uint64_t seed = 1;
  int workers = 1;
  double censored_fraction = 0.0;
  Criterion criterion = Criterion::MaxLoglik;
  FitOptions fit;
  double max_failure_fraction = 0.10;

  void validate() const;
};

struct SelectionStudyRow {
  int n = 0;
  std::map<BaselineKind, double> probability;  // over candidates, sums to 1
  std::map<BaselineKind, int> chosen_count;
  int dropped = 0;  // replications where every candidate failed
};

// Replication r at grid index g uses derive_seed(seed, {g, r}).
std::vector<SelectionStudyRow> run_selection_study(const SelectionStudyConfig& config);

}  // namespace bvf
