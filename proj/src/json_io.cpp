#include "bvf/json_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "bvf/error.hpp"

namespace bvf {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void put_params(Json& j, const std::optional<BvfParams>& p) {
  for (int k = 0; k < 4; ++k) j[kParamNames[k]] = p ? Json(p->theta()[k]) : Json(nullptr);
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("JSON document lacks '") + key + "'");
  return j.at(key);
}

double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ValidationError(std::string("JSON field '") + key + "' is not a number");
  return v.get<double>();
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ValidationError(std::string("JSON field '") + key + "' is not a string");
  return v.get<std::string>();
}

BvfParams params_from(const Json& j, BaselineKind kind) {
  std::array<double, 4> theta{};
  for (int k = 0; k < 4; ++k) theta[k] = require_number(j, kParamNames[k]);
  return BvfParams::from_theta(kind, theta);
}

}  // namespace

Json to_json(const FitResult& fit) {
  Json j;
  j["kind"] = std::string(to_string(fit.kind));
  put_params(j, fit.params_hat);
  j["loglik"] = fit.has_estimate() ? number_or_null(fit.loglik_max) : Json(nullptr);
  j["status"] = std::string(to_string(fit.status));
  if (!fit.warnings.empty()) j["warnings"] = fit.warnings;
  return j;
}

FitResult fit_from_json(const Json& j) {
  FitResult fit;
  fit.kind = parse_baseline_kind(require_string(j, "kind"));
  fit.status = parse_fit_status(require_string(j, "status"));
  const bool has = !require(j, "alpha0").is_null();
  if (has) {
    fit.params_hat = params_from(j, fit.kind);
    fit.loglik_max = require_number(j, "loglik");
  } else {
    fit.loglik_max = std::numeric_limits<double>::quiet_NaN();
  }
  if (j.contains("warnings")) fit.warnings = j.at("warnings").get<std::vector<std::string>>();
  return fit;
}

Json to_json(const ConfidenceIntervalSet& ci) {
  Json j;
  j["kind"] = std::string(to_string(ci.point.kind));
  put_params(j, ci.point);
  j["method"] = std::string(to_string(ci.method));
  j["level"] = ci.level;
  Json intervals = Json::object();
  for (int k = 0; k < 4; ++k) {
    const auto& iv = ci.intervals[k];
    intervals[kParamNames[k]] = iv ? Json::array({iv->lower, iv->upper}) : Json(nullptr);
  }
  j["intervals"] = std::move(intervals);
  if (ci.method == CiMethod::Bootstrap) {
    j["B"] = ci.B;
    j["failed_resamples"] = ci.failed_resamples;
    j["seed"] = ci.seed;
  }
  return j;
}

ConfidenceIntervalSet ci_from_json(const Json& j) {
  ConfidenceIntervalSet ci;
  const BaselineKind kind = parse_baseline_kind(require_string(j, "kind"));
  ci.point = params_from(j, kind);
  const std::string method = require_string(j, "method");
  if (method == "asymptotic")
    ci.method = CiMethod::Asymptotic;
  else if (method == "bootstrap")
    ci.method = CiMethod::Bootstrap;
  else
    throw ValidationError("unknown interval method '" + method + "'");
  ci.level = require_number(j, "level");
  const Json& intervals = require(j, "intervals");
  ci.variances.fill(std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < 4; ++k) {
    const Json& iv = require(intervals, kParamNames[k]);
    if (iv.is_null()) continue;
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw ValidationError(std::string("interval for ") + kParamNames[k] + " is not [lo, hi]");
    ci.intervals[k] = Interval{iv[0].get<double>(), iv[1].get<double>()};
  }
  if (ci.method == CiMethod::Bootstrap) {
    ci.B = require(j, "B").get<int>();
    ci.seed = require(j, "seed").get<std::uint64_t>();
    if (j.contains("failed_resamples")) ci.failed_resamples = j.at("failed_resamples").get<int>();
  }
  return ci;
}

Json to_json(const SelectionResult& sel) {
  Json j;
  j["chosen"] = std::string(to_string(sel.chosen));
  j["criterion"] = std::string(to_string(sel.criterion));
  Json table = Json::array();
  for (const RankedFit& r : sel.ranked) {
    Json row;
    row["kind"] = std::string(to_string(r.kind));
    row["loglik"] = number_or_null(r.fit.loglik_max);
    row["aic"] = number_or_null(r.aic);
    Json params;
    put_params(params, r.fit.params_hat);
    row["params"] = std::move(params);
    row["status"] = std::string(to_string(r.fit.status));
    table.push_back(std::move(row));
  }
  for (const auto& [kind, reason] : sel.excluded) {
    Json row;
    row["kind"] = std::string(to_string(kind));
    row["loglik"] = nullptr;
    row["aic"] = nullptr;
    row["params"] = nullptr;
    row["status"] = std::string(to_string(FitStatus::NoMleMonotoneProfile));
    row["reason"] = reason;
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  return j;
}

Json to_json(const EstimationStudyReport& report) {
  const EstimationStudyConfig& c = report.config;
  Json j;
  Json config;
  config["kind"] = std::string(to_string(c.true_params.kind));
  put_params(config, c.true_params);
  config["n"] = c.n;
  config["censored_fraction"] = c.censored_fraction;
  config["replications"] = c.replications;
  config["level"] = c.ci_level;
  config["B"] = c.bootstrap_B;
  config["seed"] = c.seed;
  j["config"] = std::move(config);
  j["censoring_time"] = report.censoring_time ? Json(*report.censoring_time) : Json(nullptr);
  j["successful_replications"] = report.successful_replications;
  j["failed_replications"] = report.failed_replications;
  j["mean_censored_share"] = report.mean_censored_share;
  Json params = Json::object();
  for (int k = 0; k < 4; ++k) {
    const ParameterSummary& s = report.parameters[k];
    Json p;
    p["relative_mse"] = s.relative_mse;
    p["relative_bias"] = s.relative_bias;
    p["asymptotic"] = {{"avg_length", s.asymptotic.avg_length}, {"coverage", s.asymptotic.coverage}};
    if (c.bootstrap_B > 0)
      p["bootstrap"] = {{"avg_length", s.bootstrap.avg_length}, {"coverage", s.bootstrap.coverage}};
    else
      p["bootstrap"] = nullptr;
    params[kParamNames[k]] = std::move(p);
  }
  j["parameters"] = std::move(params);
  return j;
}

Json to_json(std::span<const SelectionStudyRow> rows) {
  Json arr = Json::array();
  for (const SelectionStudyRow& r : rows) {
    Json row;
    row["n"] = r.n;
    Json prob = Json::object();
    Json count = Json::object();
    for (const auto& [k, v] : r.probability) prob[std::string(to_string(k))] = v;
    for (const auto& [k, v] : r.chosen_count) count[std::string(to_string(k))] = v;
    row["probability"] = std::move(prob);
    row["chosen_count"] = std::move(count);
    row["dropped"] = r.dropped;
    arr.push_back(std::move(row));
  }
  return arr;
}

void write_estimation_csv(const EstimationStudyReport& report, std::ostream& out) {
  const bool boot = report.config.bootstrap_B > 0;
  out << "parameter,relative_mse,relative_bias,asym_avg_length,asym_coverage";
  if (boot) out << ",boot_avg_length,boot_coverage";
  out << '\n';
  out.precision(10);
  for (int k = 0; k < 4; ++k) {
    const ParameterSummary& s = report.parameters[k];
    out << kParamNames[k] << ',' << s.relative_mse << ',' << s.relative_bias << ',' << s.asymptotic.avg_length
        << ',' << s.asymptotic.coverage;
    if (boot) out << ',' << s.bootstrap.avg_length << ',' << s.bootstrap.coverage;
    out << '\n';
  }
}

void write_selection_csv(std::span<const SelectionStudyRow> rows, std::ostream& out) {
  out << "n";
  if (!rows.empty())
    for (const auto& [k, v] : rows.front().probability) out << ',' << to_string(k);
  out << ",dropped\n";
  out.precision(10);
  for (const SelectionStudyRow& r : rows) {
    out << r.n;
    for (const auto& [k, v] : r.probability) out << ',' << v;
    out << ',' << r.dropped << '\n';
  }
}

}  // namespace bvf
