#include "bvf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "bvf/error.hpp"
#include "bvf/log.hpp"
#include "bvf/parallel.hpp"

namespace bvf {

RelativeMetrics relative_metrics(std::span<const double> estimates, double truth) {
  if (truth == 0.0) throw DomainError("relative metrics need a non-zero true value");
  if (estimates.empty()) throw DomainError("relative metrics need at least one estimate");
  double sq = 0.0, sum = 0.0;
  for (double e : estimates) {
    sq += (e - truth) * (e - truth);
    sum += e;
  }
  const double n = static_cast<double>(estimates.size());
  const double mse = sq / n;
  const double bias = sum / n - truth;
  return {mse / (truth * truth), bias / truth};
}

void EstimationStudyConfig::validate() const {
  true_params.validate();
  if (n < 10) throw ValidationError("study sample size must be at least 10");
  if (replications < 1) throw ValidationError("replications must be at least 1");
  if (!(censored_fraction >= 0.0 && censored_fraction < 1.0))
    throw ValidationError("censored fraction must lie in [0, 1)");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
  if (bootstrap_B < 0) throw ValidationError("bootstrap size must be non-negative");
  if (workers < 1) throw ValidationError("workers must be at least 1");
}

namespace {

struct ReplicationOutcome {
  bool ok = false;
  std::array<double, 4> estimate{};
  std::array<Interval, 4> asymptotic{};
  std::array<Interval, 4> bootstrap{};
  double censored_share = 0.0;
};

std::optional<double> study_censoring_time(const BvfParams& truth, double fraction) {
  if (fraction <= 0.0) return std::nullopt;
  return censoring_threshold(truth, fraction);
}

}  // namespace

EstimationStudyReport run_estimation_study(const EstimationStudyConfig& config) {
  config.validate();
  const std::optional<double> c = study_censoring_time(config.true_params, config.censored_fraction);
  const bool with_bootstrap = config.bootstrap_B > 0;

  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(config.replications));
  parallel_for(outcomes.size(), config.workers, [&](std::size_t r) {
    ReplicationOutcome& out = outcomes[r];
    rng::Engine engine = rng::make_engine(rng::derive_seed(config.seed, {r, 0}));
    const auto pairs = sample(config.true_params, static_cast<std::size_t>(config.n), engine);
    const CompetingRisksData data = from_bivariate(pairs, c);
    if (data.failures() == 0) return;
    try {
      const FitResult fit = fit_mle(data, config.true_params.kind, config.fit);
      if (fit.status != FitStatus::Converged) return;
      const ConfidenceIntervalSet asym = asymptotic_ci(fit, data, config.ci_level);
      std::optional<ConfidenceIntervalSet> boot;
      if (with_bootstrap) {
        BootstrapOptions bopts;
        bopts.fit = config.fit;
        boot = bootstrap_ci(fit, data, config.bootstrap_B, config.ci_level, rng::derive_seed(config.seed, {r, 1}),
                            bopts);
      }
      out.estimate = fit.params_hat->theta();
      for (int j = 0; j < 4; ++j) {
        out.asymptotic[j] = *asym.intervals[j];
        if (boot) out.bootstrap[j] = *boot->intervals[j];
      }
      out.censored_share =
          static_cast<double>(data.count(FailureMode::Censored)) / static_cast<double>(data.size());
      out.ok = true;
    } catch (const EstimationError& e) {
      log::debug(std::string("replication ") + std::to_string(r) + " failed: " + e.what());
    }
  });

  EstimationStudyReport report;
  report.config = config;
  report.censoring_time = c;
  std::array<std::vector<double>, 4> estimates;
  const auto truth = config.true_params.theta();
  std::array<double, 4> asym_len{}, boot_len{};
  std::array<int, 4> asym_hit{}, boot_hit{};
  double censored = 0.0;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++report.failed_replications;
      continue;
    }
    ++report.successful_replications;
    censored += o.censored_share;
    for (int j = 0; j < 4; ++j) {
      estimates[j].push_back(o.estimate[j]);
      asym_len[j] += o.asymptotic[j].length();
      asym_hit[j] += o.asymptotic[j].contains(truth[j]) ? 1 : 0;
      if (with_bootstrap) {
        boot_len[j] += o.bootstrap[j].length();
        boot_hit[j] += o.bootstrap[j].contains(truth[j]) ? 1 : 0;
      }
    }
  }
  if (report.failed_replications > config.max_failure_fraction * config.replications)
    throw EstimationError(std::to_string(report.failed_replications) + " of " +
                          std::to_string(config.replications) +
                          " replications failed to converge; check the study configuration");

  const double ok = static_cast<double>(report.successful_replications);
  report.mean_censored_share = censored / ok;
  for (int j = 0; j < 4; ++j) {
    const RelativeMetrics m = relative_metrics(estimates[j], truth[j]);
    ParameterSummary& s = report.parameters[j];
    s.relative_mse = m.relative_mse;
    s.relative_bias = m.relative_bias;
    s.asymptotic = {asym_len[j] / ok, asym_hit[j] / ok, report.successful_replications};
    if (with_bootstrap) s.bootstrap = {boot_len[j] / ok, boot_hit[j] / ok, report.successful_replications};
  }
  return report;
}

void SelectionStudyConfig::validate() const {
  parent.validate();
  if (candidates.empty()) throw ValidationError("candidate set is empty");
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      if (candidates[i] == candidates[j]) throw ValidationError("candidate models must be distinct");
  if (std::find(candidates.begin(), candidates.end(), parent.kind) == candidates.end())
    throw ValidationError("the parent model must be one of the candidates");
  if (n_grid.empty()) throw ValidationError("sample size grid is empty");
  for (int n : n_grid)
    if (n < 10) throw ValidationError("study sample size must be at least 10");
  if (replications < 1) throw ValidationError("replications must be at least 1");
  if (!(censored_fraction >= 0.0 && censored_fraction < 1.0))
    throw ValidationError("censored fraction must lie in [0, 1)");
  if (workers < 1) throw ValidationError("workers must be at least 1");
}

std::vector<SelectionStudyRow> run_selection_study(const SelectionStudyConfig& config) {
  config.validate();
  const std::optional<double> c = study_censoring_time(config.parent, config.censored_fraction);
  std::vector<SelectionStudyRow> rows;
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const int n = config.n_grid[g];
    std::vector<std::optional<BaselineKind>> chosen(static_cast<std::size_t>(config.replications));
    parallel_for(chosen.size(), config.workers, [&](std::size_t r) {
      rng::Engine engine = rng::make_engine(rng::derive_seed(config.seed, {g, r}));
      const auto pairs = sample(config.parent, static_cast<std::size_t>(n), engine);
      const CompetingRisksData data = from_bivariate(pairs, c);
      if (data.failures() == 0) return;
      try {
        chosen[r] = select_model(data, config.candidates, config.criterion, config.fit).chosen;
      } catch (const EstimationError&) {
      }
    });

    SelectionStudyRow row;
    row.n = n;
    for (BaselineKind k : config.candidates) row.chosen_count[k] = 0;
    for (const auto& k : chosen) {
      if (!k) {
        ++row.dropped;
        continue;
      }
      ++row.chosen_count[*k];
    }
    if (row.dropped > config.max_failure_fraction * config.replications)
      throw EstimationError(std::to_string(row.dropped) + " of " + std::to_string(config.replications) +
                            " selection replications failed at n = " + std::to_string(n));
    const double kept = static_cast<double>(config.replications - row.dropped);
    for (const auto& [k, count] : row.chosen_count) row.probability[k] = count / kept;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bvf
