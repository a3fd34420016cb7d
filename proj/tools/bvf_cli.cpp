#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bvf/data.hpp"
#include "bvf/error.hpp"
#include "bvf/inference.hpp"
#include "bvf/json_io.hpp"
#include "bvf/km.hpp"
#include "bvf/log.hpp"
#include "bvf/model.hpp"
#include "bvf/selection.hpp"
#include "bvf/sim_config.hpp"
#include "bvf/simulation.hpp"

namespace {

using namespace bvf;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct ParamFlags {
  std::string kind = "weibull";
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double lambda = 1.0;
  CLI::Option* kind_opt = nullptr;
  std::vector<CLI::Option*> value_opts;

  void add(CLI::App* app, bool kind_required) {
    kind_opt = app->add_option("--kind", kind, "weibull | gompertz | lomax");
    if (kind_required) kind_opt->required();
    value_opts = {app->add_option("--alpha0", alpha0, "shared-shock frailty"),
                  app->add_option("--alpha1", alpha1, "risk-1 frailty"),
                  app->add_option("--alpha2", alpha2, "risk-2 frailty"),
                  app->add_option("--lambda", lambda, "baseline parameter")};
  }

  BvfParams params() const {
    BvfParams p{alpha0, alpha1, alpha2, lambda, parse_baseline_kind(kind)};
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
    return p;
  }

  // Applies explicitly given flags over a config-derived parameter set.
  void override(BvfParams& p) const {
    if (kind_opt->count()) p.kind = parse_baseline_kind(kind);
    if (value_opts[0]->count()) p.alpha0 = alpha0;
    if (value_opts[1]->count()) p.alpha1 = alpha1;
    if (value_opts[2]->count()) p.alpha2 = alpha2;
    if (value_opts[3]->count()) p.lambda = lambda;
  }
};

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ValidationError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const Json& j, const std::string& path) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

std::vector<BaselineKind> parse_kind_list(const std::string& text) {
  std::vector<BaselineKind> kinds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) kinds.push_back(parse_baseline_kind(item));
  if (kinds.empty()) throw ValidationError("empty model list");
  return kinds;
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("--level must lie in (0, 1)");
}

int run(int argc, char** argv) {
  CLI::App app{"Bivariate frailty-family competing-risks toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample competing-risks data from a model");
  ParamFlags gen_p;
  gen_p.add(gen, true);
  int gen_n = 0;
  double gen_censor = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "sample size")->required();
  gen->add_option("--censor-frac", gen_censor, "expected censored fraction in [0, 1)");
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "output CSV (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of one family member");
  std::string fit_data, fit_kind, fit_out, fit_profile_out;
  fit->add_option("data", fit_data, "data CSV")->required();
  fit->add_option("--kind", fit_kind, "weibull | gompertz | lomax")->required();
  fit->add_option("--out", fit_out, "output JSON (default stdout)");
  fit->add_option("--profile-out", fit_profile_out, "CSV of every profile evaluation (lambda, p)");

  // ci
  auto* ci = app.add_subcommand("ci", "Confidence intervals at the MLE");
  std::string ci_data, ci_kind, ci_out, ci_method = "asymptotic";
  double ci_level = 0.95;
  int ci_B = 500, ci_workers = 1;
  std::uint64_t ci_seed = 0;
  ci->add_option("data", ci_data, "data CSV")->required();
  ci->add_option("--kind", ci_kind, "weibull | gompertz | lomax")->required();
  ci->add_option("--method", ci_method, "asymptotic | bootstrap")
      ->check(CLI::IsMember({"asymptotic", "bootstrap"}));
  ci->add_option("--level", ci_level, "confidence level");
  ci->add_option("--boot-B", ci_B, "bootstrap resamples");
  auto* ci_seed_opt = ci->add_option("--seed", ci_seed, "RNG seed (required for bootstrap)");
  ci->add_option("--workers", ci_workers, "worker threads");
  ci->add_option("--out", ci_out, "output JSON (default stdout)");

  // select
  auto* sel = app.add_subcommand("select", "Choose among family members by maximized likelihood");
  std::string sel_data, sel_kinds = "weibull,gompertz,lomax", sel_criterion = "loglik", sel_out;
  sel->add_option("data", sel_data, "data CSV")->required();
  sel->add_option("--kinds", sel_kinds, "comma-separated candidate list");
  sel->add_option("--criterion", sel_criterion, "loglik | aic");
  sel->add_option("--out", sel_out, "output JSON (default stdout)");

  // sim-estimate
  auto* se = app.add_subcommand("sim-estimate", "Monte Carlo study of estimator performance");
  ParamFlags se_p;
  se_p.add(se, false);
  std::string se_config, se_out, se_csv;
  int se_n = 0, se_reps = 0, se_B = 0, se_workers = 1;
  double se_censor = 0.0, se_level = 0.95;
  std::uint64_t se_seed = 0;
  se->add_option("--config", se_config, "key = value study file");
  auto* se_n_opt = se->add_option("--n", se_n, "sample size");
  auto* se_censor_opt = se->add_option("--censor-frac", se_censor, "expected censored fraction");
  auto* se_reps_opt = se->add_option("--reps", se_reps, "replications");
  auto* se_B_opt = se->add_option("--boot-B", se_B, "bootstrap resamples (0 skips)");
  auto* se_level_opt = se->add_option("--level", se_level, "confidence level");
  auto* se_seed_opt = se->add_option("--seed", se_seed, "RNG seed");
  auto* se_workers_opt = se->add_option("--workers", se_workers, "worker threads");
  se->add_option("--out", se_out, "output JSON (default stdout)");
  se->add_option("--csv", se_csv, "also write the per-parameter table as CSV");

  // sim-select
  auto* ss = app.add_subcommand("sim-select", "Monte Carlo study of model-selection probabilities");
  ParamFlags ss_p;
  ss_p.add(ss, false);
  std::string ss_config, ss_out, ss_csv, ss_kinds, ss_grid, ss_criterion;
  int ss_reps = 0, ss_workers = 1;
  double ss_censor = 0.0;
  std::uint64_t ss_seed = 0;
  ss->add_option("--config", ss_config, "key = value study file");
  auto* ss_kinds_opt = ss->add_option("--kinds", ss_kinds, "comma-separated candidate list");
  auto* ss_grid_opt = ss->add_option("--n-grid", ss_grid, "comma-separated sample sizes");
  auto* ss_n_opt = ss->add_option("--n", ss_grid, "single sample size");
  auto* ss_censor_opt = ss->add_option("--censor-frac", ss_censor, "expected censored fraction");
  auto* ss_reps_opt = ss->add_option("--reps", ss_reps, "replications per sample size");
  auto* ss_seed_opt = ss->add_option("--seed", ss_seed, "RNG seed");
  auto* ss_workers_opt = ss->add_option("--workers", ss_workers, "worker threads");
  auto* ss_criterion_opt = ss->add_option("--criterion", ss_criterion, "loglik | aic");
  ss->add_option("--out", ss_out, "output JSON (default stdout)");
  ss->add_option("--csv", ss_csv, "also write the per-n table as CSV");
  ss_grid_opt->excludes(ss_n_opt);

  // profile-curve
  auto* pc = app.add_subcommand("profile-curve", "Profile log-likelihood on a log-spaced lambda grid");
  std::string pc_data, pc_kind, pc_out;
  double pc_lo = 0.01, pc_hi = 10.0;
  int pc_points = 200;
  pc->add_option("data", pc_data, "data CSV")->required();
  pc->add_option("--kind", pc_kind, "weibull | gompertz | lomax")->required();
  pc->add_option("--lambda-min", pc_lo, "smallest lambda");
  pc->add_option("--lambda-max", pc_hi, "largest lambda");
  pc->add_option("--points", pc_points, "grid size");
  pc->add_option("--out", pc_out, "output CSV (default stdout)");

  // density-grid
  auto* dg = app.add_subcommand("density-grid", "Joint density on a regular grid");
  ParamFlags dg_p;
  dg_p.add(dg, true);
  double dg_xmax = 3.0, dg_ymax = 3.0;
  int dg_points = 60;
  std::string dg_out;
  dg->add_option("--x-max", dg_xmax, "grid extent in x");
  dg->add_option("--y-max", dg_ymax, "grid extent in y");
  dg->add_option("--points", dg_points, "grid points per axis");
  dg->add_option("--out", dg_out, "output CSV (default stdout)");

  // km-compare
  auto* km = app.add_subcommand("km-compare", "Kaplan-Meier curve of the minimum against a fitted model");
  ParamFlags km_p;
  km_p.add(km, false);
  std::string km_data, km_fit, km_out;
  int km_grid = 200;
  km->add_option("data", km_data, "data CSV")->required();
  auto* km_fit_opt = km->add_option("--fit", km_fit, "fit JSON supplying the model parameters");
  km->add_option("--grid", km_grid, "extra model grid points");
  km->add_option("--out", km_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (gen->parsed()) {
    if (gen_n < 1) throw ValidationError("--n must be at least 1");
    if (!(gen_censor >= 0.0 && gen_censor < 1.0)) throw ValidationError("--censor-frac must lie in [0, 1)");
    const BvfParams p = gen_p.params();
    std::optional<double> c;
    if (gen_censor > 0.0) c = censoring_threshold(p, gen_censor);
    const auto pairs = sample(p, static_cast<std::size_t>(gen_n), gen_seed);
    const CompetingRisksData data = from_bivariate(pairs, c);
    Output out(gen_out);
    write_csv(data, out.stream());
    // Counts go to stdout unless the data itself does.
    std::ostream& info = out.to_file() ? std::cout : std::cerr;
    const auto& m = data.counts();
    info << "m0=" << m[0] << " m1=" << m[1] << " m2=" << m[2] << " m3=" << m[3] << '\n';
    return kExitOk;
  }

  if (fit->parsed()) {
    const BaselineKind kind = parse_baseline_kind(fit_kind);
    const CompetingRisksData data = load_csv(fit_data);
    FitOptions opts;
    opts.record_trace = !fit_profile_out.empty();
    const FitResult r = fit_mle(data, kind, opts);
    for (const auto& w : r.warnings) log::warn(w);
    write_json(to_json(r), fit_out);
    if (!fit_profile_out.empty()) {
      Output prof(fit_profile_out);
      prof.stream() << "lambda,profile\n";
      prof.stream().precision(17);
      for (const auto& [l, v] : r.profile_trace) prof.stream() << l << ',' << v << '\n';
    }
    return kExitOk;
  }

  if (ci->parsed()) {
    const BaselineKind kind = parse_baseline_kind(ci_kind);
    check_level(ci_level);
    const bool boot = ci_method == "bootstrap";
    if (boot && !ci_seed_opt->count()) throw ValidationError("--seed is required for bootstrap intervals");
    if (boot && ci_B < 1) throw ValidationError("--boot-B must be at least 1");
    if (ci_workers < 1) throw ValidationError("--workers must be at least 1");
    const CompetingRisksData data = load_csv(ci_data);
    const FitResult r = fit_mle(data, kind);
    if (!r.has_estimate()) throw EstimationError("no maximum-likelihood estimate: profile is monotone");
    ConfidenceIntervalSet set;
    if (boot) {
      BootstrapOptions bo;
      bo.workers = ci_workers;
      set = bootstrap_ci(r, data, ci_B, ci_level, ci_seed, bo);
    } else {
      set = asymptotic_ci(r, data, ci_level);
    }
    Json j = to_json(set);
    j["loglik"] = r.loglik_max;
    j["status"] = std::string(to_string(r.status));
    write_json(j, ci_out);
    return kExitOk;
  }

  if (sel->parsed()) {
    const auto kinds = parse_kind_list(sel_kinds);
    const Criterion criterion = parse_criterion(sel_criterion);
    const CompetingRisksData data = load_csv(sel_data);
    write_json(to_json(select_model(data, kinds, criterion)), sel_out);
    return kExitOk;
  }

  if (se->parsed()) {
    EstimationStudyConfig cfg;
    if (!se_config.empty()) cfg = estimation_config_from(load_key_value(se_config), cfg);
    se_p.override(cfg.true_params);
    if (se_n_opt->count()) cfg.n = se_n;
    if (se_censor_opt->count()) cfg.censored_fraction = se_censor;
    if (se_reps_opt->count()) cfg.replications = se_reps;
    if (se_B_opt->count()) cfg.bootstrap_B = se_B;
    if (se_level_opt->count()) cfg.ci_level = se_level;
    if (se_seed_opt->count()) cfg.seed = se_seed;
    if (se_workers_opt->count()) cfg.workers = se_workers;
    if (!se_seed_opt->count() && (se_config.empty() || !load_key_value(se_config).contains("seed")))
      throw ValidationError("--seed is required (flag or config key)");
    try {
      cfg.validate();
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
    const EstimationStudyReport report = run_estimation_study(cfg);
    write_json(to_json(report), se_out);
    if (!se_csv.empty()) {
      Output csv(se_csv);
      write_estimation_csv(report, csv.stream());
    }
    return kExitOk;
  }

  if (ss->parsed()) {
    SelectionStudyConfig cfg;
    cfg.candidates.assign(kAllBaselineKinds.begin(), kAllBaselineKinds.end());
    cfg.n_grid = {50, 150, 300};
    KeyValueConfig kv;
    if (!ss_config.empty()) kv = load_key_value(ss_config);
    cfg = selection_config_from(kv, cfg);
    ss_p.override(cfg.parent);
    if (ss_kinds_opt->count()) cfg.candidates = parse_kind_list(ss_kinds);
    if (ss_grid_opt->count() || ss_n_opt->count()) {
      KeyValueConfig grid{{"n_grid", ss_grid}};
      cfg = selection_config_from(grid, cfg);
    }
    if (ss_censor_opt->count()) cfg.censored_fraction = ss_censor;
    if (ss_reps_opt->count()) cfg.replications = ss_reps;
    if (ss_seed_opt->count()) cfg.seed = ss_seed;
    if (ss_workers_opt->count()) cfg.workers = ss_workers;
    if (ss_criterion_opt->count()) cfg.criterion = parse_criterion(ss_criterion);
    if (!ss_seed_opt->count() && !kv.contains("seed"))
      throw ValidationError("--seed is required (flag or config key)");
    try {
      cfg.validate();
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
    const auto rows = run_selection_study(cfg);
    Json j;
    j["parent"] = std::string(to_string(cfg.parent.kind));
    j["criterion"] = std::string(to_string(cfg.criterion));
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;
    j["rows"] = to_json(std::span<const SelectionStudyRow>(rows));
    write_json(j, ss_out);
    if (!ss_csv.empty()) {
      Output csv(ss_csv);
      write_selection_csv(rows, csv.stream());
    }
    return kExitOk;
  }

  if (pc->parsed()) {
    const BaselineKind kind = parse_baseline_kind(pc_kind);
    if (!(pc_lo > 0.0 && pc_hi > pc_lo && std::isfinite(pc_hi)))
      throw ValidationError("need 0 < --lambda-min < --lambda-max");
    if (pc_points < 2) throw ValidationError("--points must be at least 2");
    const CompetingRisksData data = load_csv(pc_data);
    if (data.failures() == 0) throw EstimationError("no failures observed");
    const ProfileContext ctx(data, kind);
    Output out(pc_out);
    out.stream() << "lambda,profile\n";
    out.stream().precision(17);
    const double step = std::log(pc_hi / pc_lo) / (pc_points - 1);
    for (int i = 0; i < pc_points; ++i) {
      const double l = pc_lo * std::exp(step * i);
      out.stream() << l << ',' << ctx.profile(l) << '\n';
    }
    return kExitOk;
  }

  if (dg->parsed()) {
    const BvfParams p = dg_p.params();
    if (!(dg_xmax > 0.0 && dg_ymax > 0.0)) throw ValidationError("grid extents must be positive");
    if (dg_points < 1) throw ValidationError("--points must be at least 1");
    Output out(dg_out);
    out.stream() << "x,y,density\n";
    out.stream().precision(12);
    for (int i = 1; i <= dg_points; ++i) {
      const double x = dg_xmax * i / dg_points;
      for (int k = 1; k <= dg_points; ++k) {
        const double y = dg_ymax * k / dg_points;
        if (x == y) continue;  // the density is singular on the diagonal
        out.stream() << x << ',' << y << ',' << jpdf_ac(p, x, y) << '\n';
      }
    }
    return kExitOk;
  }

  if (km->parsed()) {
    const CompetingRisksData data = load_csv(km_data);
    BvfParams p;
    if (km_fit_opt->count()) {
      std::ifstream in(km_fit);
      if (!in) throw ValidationError("cannot open fit file " + km_fit);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("fit file: ") + e.what());
      }
      const FitResult r = fit_from_json(j);
      if (!r.has_estimate()) throw ValidationError("fit file carries no estimate");
      p = *r.params_hat;
      km_p.override(p);
    } else {
      if (!km_p.kind_opt->count()) throw ValidationError("either --fit or --kind with parameters is required");
      p = km_p.params();
    }
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
    Output out(km_out);
    out.stream() << "t,km_survival,model_survival\n";
    out.stream().precision(12);
    for (const auto& row : km_compare(data, p, km_grid))
      out.stream() << row.t << ',' << row.km_survival << ',' << row.model_survival << '\n';
    return kExitOk;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bvf::EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const bvf::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bvf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const bvf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
