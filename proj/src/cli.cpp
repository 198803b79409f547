#include "bmt/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bmt/errors.hpp"
#include "bmt/io.hpp"
#include "bmt/lasso.hpp"
#include "bmt/metrics.hpp"
#include "bmt/selector.hpp"
#include "bmt/simulation.hpp"
#include "bmt/theory.hpp"
#include "bmt/workflow.hpp"

namespace bmt {

namespace {

std::string fmt(double v, int prec = 6) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BMT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
  }
  return 0;
}

struct SelectorFlags {
  double p = 0.05;
  double c = 1.0;
  double delta = 1.0;
  double delta_star = -1.0;  // negative: unset, falls back to delta
  std::size_t max_stages = 0;
  bool fixed_n = false;
  bool robust = false;
  bool no_intercept = false;

  SelectionConfig to_config() const {
    SelectionConfig cfg;
    cfg.p = p;
    cfg.c = c;
    cfg.delta = delta;
    if (delta_star >= 0.0) cfg.delta_star = delta_star;
    cfg.max_stages = max_stages;
    cfg.shrink_n_per_stage = !fixed_n;
    cfg.robust_se = robust;
    cfg.add_intercept = !no_intercept;
    return cfg;
  }

  void describe(KeyValues& kv) const {
    kv["p"] = format_double(p);
    kv["c"] = format_double(c);
    kv["delta"] = format_double(delta);
    if (delta_star >= 0.0) kv["delta_star"] = format_double(delta_star);
    if (max_stages > 0) kv["max_stages"] = std::to_string(max_stages);
    kv["shrink_n"] = fixed_n ? "0" : "1";
    kv["robust"] = robust ? "1" : "0";
    kv["intercept"] = no_intercept ? "0" : "1";
  }
};

void add_selector_flags(CLI::App* cmd, SelectorFlags& f) {
  cmd->add_option("--p", f.p, "family-wise size parameter p");
  cmd->add_option("--c", f.c, "scale c of f(n,delta)");
  cmd->add_option("--delta", f.delta, "stage-1 exponent delta");
  cmd->add_option("--delta-star", f.delta_star, "exponent for stages >= 2 (default: delta)");
  cmd->add_option("--max-stages", f.max_stages, "stage cap (0 = automatic)");
  cmd->add_flag("--fixed-n", f.fixed_n, "keep n in c_p fixed instead of shrinking per stage");
  cmd->add_flag("--robust", f.robust, "heteroskedasticity-robust stage and post-fit SEs");
  cmd->add_flag("--no-intercept", f.no_intercept, "do not add an intercept");
}

struct LassoFlags {
  std::size_t folds = 10;
  std::size_t n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  bool shuffle_folds = false;

  LassoConfig to_config(bool add_intercept, std::uint64_t seed) const {
    LassoConfig cfg;
    cfg.folds = folds;
    cfg.n_lambda = n_lambda;
    cfg.lambda_min_ratio = lambda_min_ratio;
    cfg.shuffle_folds = shuffle_folds;
    cfg.add_intercept = add_intercept;
    cfg.cv_seed = seed;
    return cfg;
  }
};

void add_lasso_flags(CLI::App* cmd, LassoFlags& f) {
  cmd->add_option("--folds", f.folds, "cross-validation folds");
  cmd->add_option("--n-lambda", f.n_lambda, "penalty path length");
  cmd->add_option("--lambda-min-ratio", f.lambda_min_ratio, "smallest lambda / lambda_max");
  cmd->add_flag("--shuffle-folds", f.shuffle_folds,
                "shuffled folds instead of contiguous time blocks");
}

struct DesignFlags {
  bool add_constant = false;
  bool add_trend = false;
  std::size_t lag_target = 0;
  std::size_t candidate_lags = 0;
  bool standardize = false;
  bool add_first_pc = false;

  DesignOptions to_options() const {
    DesignOptions opt;
    opt.add_constant = add_constant;
    opt.add_trend = add_trend;
    opt.lag_target = lag_target;
    opt.lags_of_candidates = candidate_lags;
    opt.standardize = standardize;
    opt.add_first_pc = add_first_pc;
    return opt;
  }
};

void add_design_flags(CLI::App* cmd, DesignFlags& f) {
  cmd->add_flag("--add-constant", f.add_constant,
                "append a constant control (disables the selector intercept)");
  cmd->add_flag("--add-trend", f.add_trend, "append a standardized linear trend control");
  cmd->add_option("--lag-target", f.lag_target, "append this many target lags as controls");
  cmd->add_option("--candidate-lags", f.candidate_lags,
                  "append this many lags of every candidate");
  cmd->add_flag("--standardize", f.standardize, "standardize candidates before selection");
  cmd->add_flag("--add-first-pc", f.add_first_pc,
                "append the first principal component of the candidates as a control");
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) throw InvalidArgument("no methods requested");
  std::vector<Method> out;
  for (const auto& name : names) {
    const auto m = method_from_name(name);
    if (!m) {
      std::string known;
      for (Method mm : all_methods()) {
        if (!known.empty()) known += ", ";
        known += method_name(mm);
      }
      throw InvalidArgument("unknown method '" + name + "' (known: " + known + ")");
    }
    out.push_back(*m);
  }
  return out;
}

void print_method_report(const MethodReport& rep) {
  std::cout << "method " << rep.method << ": selected " << rep.selected.size()
            << " candidate(s)";
  if (std::isfinite(rep.lambda)) std::cout << " at lambda = " << fmt(rep.lambda);
  std::cout << "\n";
  for (std::size_t j = 0; j < rep.selected.size(); ++j)
    std::cout << "  [" << (rep.selected[j] + 1) << "] " << rep.selected_names[j]
              << "  coef = " << fmt(rep.coefficients[j])
              << "  se = " << fmt(rep.se[j]) << "  t = " << fmt(rep.t_stats[j]) << "\n";
  std::cout << "  in-sample rmse = " << fmt(rep.rmse_in_sample)
            << "  bic = " << fmt(rep.bic) << "\n";
  for (const auto& fc : rep.forecasts)
    std::cout << "  h = " << fc.horizon << "  rmsfe = " << fmt(fc.rmsfe)
              << "  r2_oos = " << fmt(fc.r2_oos) << "\n";
}

struct DataFlags {
  std::string data_path;
  std::string target;
  std::vector<std::string> controls;
  std::vector<std::string> candidates;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.data_path, "input CSV path")->required();
  cmd->add_option("--target", f.target, "target column name")->required();
  cmd->add_option("--controls", f.controls, "always-kept control columns")->delimiter(',');
  cmd->add_option("--candidates", f.candidates,
                  "candidate columns (default: all remaining)")
      ->delimiter(',');
}

void describe_data(KeyValues& kv, const DataFlags& d, const DesignFlags& g) {
  kv["data"] = d.data_path;
  kv["target"] = d.target;
  std::string joined;
  for (const auto& s : d.controls) joined += (joined.empty() ? "" : ",") + s;
  if (!joined.empty()) kv["controls"] = joined;
  joined.clear();
  for (const auto& s : d.candidates) joined += (joined.empty() ? "" : ",") + s;
  if (!joined.empty()) kv["candidates"] = joined;
  if (g.add_constant) kv["add_constant"] = "1";
  if (g.add_trend) kv["add_trend"] = "1";
  if (g.lag_target) kv["lag_target"] = std::to_string(g.lag_target);
  if (g.candidate_lags) kv["candidate_lags"] = std::to_string(g.candidate_lags);
  if (g.standardize) kv["standardize"] = "1";
  if (g.add_first_pc) kv["add_first_pc"] = "1";
}

int run_parsed(CLI::App& app, int argc, const char* const* argv) {
  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

std::vector<std::string> method_name_list() {
  std::vector<std::string> out;
  for (Method m : all_methods()) out.emplace_back(method_name(m));
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"bmt: stagewise multiple-testing variable selection toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // ---- select ----------------------------------------------------------
  auto* select_cmd = app.add_subcommand("select", "run variable selection on a CSV dataset");
  DataFlags sel_data;
  DesignFlags sel_design;
  SelectorFlags sel_selector;
  LassoFlags sel_lasso;
  std::vector<std::string> sel_methods = {"bmt"};
  std::uint64_t sel_seed = default_seed();
  std::string sel_out;
  add_data_flags(select_cmd, sel_data);
  add_design_flags(select_cmd, sel_design);
  add_selector_flags(select_cmd, sel_selector);
  add_lasso_flags(select_cmd, sel_lasso);
  select_cmd->add_option("--methods", sel_methods, "comma-separated method list")
      ->delimiter(',')
      ->check(CLI::IsMember(method_name_list()));
  select_cmd->add_option("--seed", sel_seed, "seed (default: BMT_SEED env or 0)");
  select_cmd->add_option("--out", sel_out, "write the report bundle JSON here");

  select_cmd->callback([&]() {
    CsvLoadReport load_report;
    const Dataset raw = load_csv(sel_data.data_path,
                                 {sel_data.target, sel_data.controls, sel_data.candidates},
                                 &load_report);
    const BuiltDesign built = build_design(raw, sel_design.to_options());
    SelectorFlags sf = sel_selector;
    if (sel_design.add_constant) sf.no_intercept = true;
    const SelectionConfig selcfg = sf.to_config();
    const LassoConfig lassocfg = sel_lasso.to_config(selcfg.add_intercept, sel_seed);

    ReportBundle bundle;
    bundle.version = kVersion;
    bundle.seed = sel_seed;
    bundle.rows_used = built.dataset.rows();
    bundle.rows_dropped = load_report.rows_dropped;
    KeyValues kv;
    kv["command"] = "select";
    describe_data(kv, sel_data, sel_design);
    sf.describe(kv);
    kv["seed"] = std::to_string(sel_seed);
    bundle.config_hash = config_hash(kv);

    std::cout << "rows used: " << bundle.rows_used << " (dropped "
              << bundle.rows_dropped << " incomplete)\n";
    for (Method m : parse_methods(sel_methods)) {
      const SelectionResult res = run_method(m, built.dataset, selcfg, lassocfg);
      MethodReport rep = summarize_selection(built.dataset, res, m, selcfg.add_intercept);
      print_method_report(rep);
      bundle.methods.push_back(std::move(rep));
    }
    if (!sel_out.empty()) {
      write_text_file(sel_out, bundle_to_json(bundle));
      std::cout << "report written to " << sel_out << "\n";
    }
  });

  // ---- simulate --------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo over a design grid");
  std::string sim_grid_path;
  std::size_t sim_reps = 100;
  std::size_t sim_workers = 1;
  std::uint64_t sim_seed = default_seed();
  std::vector<std::string> sim_methods = {"bmt", "ocmt", "lasso_bic", "lasso_cv",
                                          "adaptive_lasso"};
  std::string sim_out_dir;
  SelectorFlags sim_selector;
  sim_cmd->add_option("--grid", sim_grid_path, "grid config file")->required();
  sim_cmd->add_option("--reps", sim_reps, "replications per design");
  sim_cmd->add_option("--seed", sim_seed, "master seed (default: BMT_SEED env or 0)");
  sim_cmd->add_option("--workers", sim_workers, "worker threads (0 = hardware)");
  sim_cmd->add_option("--methods", sim_methods, "methods to run")
      ->delimiter(',')
      ->check(CLI::IsMember(method_name_list()));
  sim_cmd->add_option("--out-dir", sim_out_dir, "write summary.json and per-metric CSVs");
  add_selector_flags(sim_cmd, sim_selector);

  sim_cmd->callback([&]() {
    const KeyValues kv = load_config(sim_grid_path);
    const GridSpec grid = parse_grid(kv);
    const std::vector<DgpConfig> designs = expand_grid(grid);
    const std::vector<Method> methods = parse_methods(sim_methods);
    const std::vector<DesignSummary> summaries =
        run_grid(designs, sim_reps, methods, sim_selector.to_config(), sim_workers, sim_seed);

    for (const auto& s : summaries) {
      std::cout << "design vif=" << fmt(s.config.vif) << " pi=" << fmt(s.config.pi)
                << " T=" << s.config.t << " n=" << s.config.n << " (" << s.reps
                << " reps)\n";
      for (const auto& [m, rep] : s.by_method)
        std::cout << "  " << method_name(m) << ": mcc=" << fmt(rep.mcc, 4)
                  << " f1=" << fmt(rep.f1, 4) << " fdr=" << fmt(rep.fdr, 4)
                  << " size=" << fmt(rep.model_size, 4) << " rmse=" << fmt(rep.rmse, 4)
                  << " rmsfe=" << fmt(rep.rmsfe, 4) << "\n";
    }
    if (!sim_out_dir.empty()) {
      std::filesystem::create_directories(sim_out_dir);
      write_text_file(sim_out_dir + "/summary.json", summaries_to_json(summaries));
      for (const auto& metric : metric_names())
        write_text_file(sim_out_dir + "/metric_" + metric + ".csv",
                        metric_table_csv(summaries, metric));
      std::cout << "tables written to " << sim_out_dir << "\n";
    }
  });

  // ---- theory ----------------------------------------------------------
  auto* theory_cmd = app.add_subcommand("theory", "closed-form selection condition checks");
  theory_cmd->require_subcommand(1);

  auto* wedge_cmd = theory_cmd->add_subcommand("wedge", "correlation wedge interval");
  double wedge_alpha = 0.2;
  wedge_cmd->add_option("--alpha", wedge_alpha, "second-signal coefficient")->required();
  wedge_cmd->callback([&]() {
    const WedgeInterval w = wedge_interval(wedge_alpha);
    std::cout << "interval: (" << fmt(w.lower, 10) << ", " << fmt(w.upper, 10) << ")\n"
              << "nonempty: " << (w.nonempty ? "yes" : "no") << "\n";
  });

  auto* nc_cmd = theory_cmd->add_subcommand("noncentrality", "stage-1 noncentralities");
  double nc_beta = 1.0, nc_sigma11 = 1.0, nc_sigma_u2 = 1.0, nc_rho = 0.5;
  std::size_t nc_t = 100;
  nc_cmd->add_option("--beta", nc_beta, "signal coefficient");
  nc_cmd->add_option("--sigma11", nc_sigma11, "signal variance");
  nc_cmd->add_option("--sigma-u2", nc_sigma_u2, "error variance");
  nc_cmd->add_option("--rho", nc_rho, "signal-proxy correlation")->required();
  nc_cmd->add_option("--T", nc_t, "sample size");
  nc_cmd->callback([&]() {
    const NoncentralityReport r =
        stage1_noncentrality(nc_beta, nc_sigma11, nc_sigma_u2, nc_rho, nc_t);
    std::cout << "lambda_signal = " << fmt(r.lambda_signal, 10) << "\n"
              << "lambda_proxy = " << fmt(r.lambda_proxy, 10) << "\n"
              << "gap = " << fmt(r.gap_direct, 10) << "\n"
              << "gap_closed_form = " << fmt(r.gap_closed_form, 10) << "\n";
  });

  auto* irr_cmd = theory_cmd->add_subcommand("irrepresentable", "mutual-incoherence check");
  double irr_rho = 0.0;
  std::size_t irr_k = 1;
  std::string irr_sigma_path;
  std::vector<std::size_t> irr_support;
  std::vector<double> irr_signs;
  irr_cmd->add_option("--rho", irr_rho, "equicorrelated proxy loading");
  irr_cmd->add_option("--k", irr_k, "signal count for the equicorrelated design");
  irr_cmd->add_option("--sigma", irr_sigma_path, "covariance CSV (headerless)");
  irr_cmd->add_option("--support", irr_support, "1-based support indices")->delimiter(',');
  irr_cmd->add_option("--signs", irr_signs, "coefficient signs on the support")
      ->delimiter(',');
  irr_cmd->callback([&]() {
    Matrix sigma;
    std::vector<std::size_t> support;
    std::vector<double> signs;
    if (!irr_sigma_path.empty()) {
      sigma = load_matrix_csv(irr_sigma_path);
      if (irr_support.empty())
        throw InvalidArgument("--support is required with --sigma");
      for (std::size_t idx : irr_support) {
        if (idx == 0) throw InvalidArgument("support indices are 1-based");
        support.push_back(idx - 1);
      }
      signs = irr_signs.empty() ? std::vector<double>(support.size(), 1.0) : irr_signs;
    } else {
      // k unit-variance signals, one proxy correlated rho with each
      sigma = Matrix(irr_k + 1, irr_k + 1);
      for (std::size_t i = 0; i <= irr_k; ++i) sigma(i, i) = 1.0;
      for (std::size_t i = 0; i < irr_k; ++i) {
        sigma(irr_k, i) = irr_rho;
        sigma(i, irr_k) = irr_rho;
      }
      for (std::size_t i = 0; i < irr_k; ++i) support.push_back(i);
      signs.assign(irr_k, 1.0);
    }
    const IrrepresentableReport r = irrepresentable_check(sigma, support, signs);
    std::cout << "value = " << fmt(r.value, 10) << "\n"
              << "holds: " << (r.holds ? "yes" : "no") << "\n";
  });

  auto* thr_cmd = theory_cmd->add_subcommand("thresholds", "stagewise correlation bounds");
  std::vector<double> thr_betas;
  thr_cmd->add_option("--betas", thr_betas, "coefficients, descending magnitude")
      ->required()
      ->delimiter(',');
  thr_cmd->callback([&]() {
    const std::vector<double> th = theorem7_thresholds(thr_betas);
    std::cout << "thresholds:";
    double lo = th.front();
    for (double v : th) {
      std::cout << ' ' << fmt(v, 10);
      lo = std::min(lo, v);
    }
    std::cout << "\nconsistency region: rho < " << fmt(lo, 10) << "\n";
  });

  auto* dom_cmd = theory_cmd->add_subcommand("dominance", "signal-to-proxy dominance");
  double dom_sigma11 = 1.0, dom_beta1 = 1.0, dom_si1 = 0.0, dom_sii = 1.0;
  std::vector<double> dom_sigma12, dom_beta2, dom_si2;
  dom_cmd->add_option("--sigma11", dom_sigma11, "variance of the lead signal");
  dom_cmd->add_option("--beta1", dom_beta1, "lead signal coefficient");
  dom_cmd->add_option("--sigma-12", dom_sigma12, "cov(lead signal, other signals)")
      ->delimiter(',');
  dom_cmd->add_option("--beta2", dom_beta2, "other signal coefficients")->delimiter(',');
  dom_cmd->add_option("--sigma-i1", dom_si1, "cov(proxy, lead signal)")->required();
  dom_cmd->add_option("--sigma-ii", dom_sii, "proxy variance");
  dom_cmd->add_option("--sigma-i2", dom_si2, "cov(proxy, other signals)")->delimiter(',');
  dom_cmd->callback([&]() {
    CovarianceSpec spec;
    spec.sigma11 = dom_sigma11;
    spec.beta1 = dom_beta1;
    spec.sigma_12 = dom_sigma12;
    spec.beta2 = dom_beta2;
    ProxyRow row;
    row.sigma_i1 = dom_si1;
    row.sigma_ii = dom_sii;
    row.sigma_i2 = dom_si2.empty() ? std::vector<double>(dom_beta2.size(), 0.0) : dom_si2;
    spec.proxies.push_back(row);
    const DominanceReport r = dominance_condition(spec, 0);
    std::cout << "lhs = " << fmt(r.lhs, 10) << "\n"
              << "rhs = " << fmt(r.rhs, 10) << "\n"
              << "holds: " << (r.holds ? "yes" : "no") << "\n";
  });

  // ---- forecast --------------------------------------------------------
  auto* fc_cmd = app.add_subcommand("forecast", "pseudo-out-of-sample forecast evaluation");
  DataFlags fc_data;
  DesignFlags fc_design;
  SelectorFlags fc_selector;
  LassoFlags fc_lasso;
  std::vector<std::string> fc_methods = {"bmt"};
  std::vector<std::size_t> fc_horizons = {1};
  double fc_train_fraction = 0.8;
  std::size_t fc_train_length = 0;
  std::uint64_t fc_seed = default_seed();
  std::string fc_out;
  add_data_flags(fc_cmd, fc_data);
  add_design_flags(fc_cmd, fc_design);
  add_selector_flags(fc_cmd, fc_selector);
  add_lasso_flags(fc_cmd, fc_lasso);
  fc_cmd->add_option("--methods", fc_methods, "methods to evaluate")
      ->delimiter(',')
      ->check(CLI::IsMember(method_name_list()));
  fc_cmd->add_option("--horizons", fc_horizons, "direct forecast horizons")->delimiter(',');
  fc_cmd->add_option("--train-fraction", fc_train_fraction, "training share of the sample");
  fc_cmd->add_option("--train-length", fc_train_length,
                     "explicit training length (overrides the fraction)");
  fc_cmd->add_option("--seed", fc_seed, "seed (default: BMT_SEED env or 0)");
  fc_cmd->add_option("--out", fc_out, "write the report bundle JSON here");

  fc_cmd->callback([&]() {
    CsvLoadReport load_report;
    const Dataset raw = load_csv(fc_data.data_path,
                                 {fc_data.target, fc_data.controls, fc_data.candidates},
                                 &load_report);
    const BuiltDesign built = build_design(raw, fc_design.to_options());
    SelectorFlags sf = fc_selector;
    if (fc_design.add_constant) sf.no_intercept = true;
    const SelectionConfig selcfg = sf.to_config();
    const LassoConfig lassocfg = fc_lasso.to_config(selcfg.add_intercept, fc_seed);

    ForecastSplit split;
    split.train_fraction = fc_train_fraction;
    split.train_length = fc_train_length;
    ReportBundle bundle = forecast_evaluate(built.dataset, split, parse_methods(fc_methods),
                                            fc_horizons, selcfg, lassocfg);
    bundle.version = kVersion;
    bundle.seed = fc_seed;
    bundle.rows_dropped = load_report.rows_dropped;
    KeyValues kv;
    kv["command"] = "forecast";
    describe_data(kv, fc_data, fc_design);
    sf.describe(kv);
    kv["train_fraction"] = format_double(fc_train_fraction);
    if (fc_train_length) kv["train_length"] = std::to_string(fc_train_length);
    kv["seed"] = std::to_string(fc_seed);
    bundle.config_hash = config_hash(kv);

    std::cout << "rows used: " << bundle.rows_used << " (dropped "
              << bundle.rows_dropped << " incomplete)\n";
    for (const auto& rep : bundle.methods) print_method_report(rep);
    if (!fc_out.empty()) {
      write_text_file(fc_out, bundle_to_json(bundle));
      std::cout << "report written to " << fc_out << "\n";
    }
  });

  // ---- metrics ---------------------------------------------------------
  auto* met_cmd = app.add_subcommand("metrics", "score a selected set against the truth");
  std::vector<std::size_t> met_selected, met_true;
  std::size_t met_n = 0;
  met_cmd->add_option("--selected", met_selected, "1-based selected indices")->delimiter(',');
  met_cmd->add_option("--true", met_true, "1-based true signal indices")
      ->required()
      ->delimiter(',');
  met_cmd->add_option("--n", met_n, "candidate count")->required();
  met_cmd->callback([&]() {
    const auto shift = [](const std::vector<std::size_t>& one_based) {
      std::vector<std::size_t> out;
      for (std::size_t v : one_based) {
        if (v == 0) throw InvalidArgument("indices are 1-based");
        out.push_back(v - 1);
      }
      return out;
    };
    const ConfusionCounts c = confusion(shift(met_selected), shift(met_true), met_n);
    std::cout << "tp = " << c.tp << "  fp = " << c.fp << "  tn = " << c.tn
              << "  fn = " << c.fn << "\n"
              << "mcc = " << fmt(mcc(c), 10) << "\n"
              << "f1 = " << fmt(f1(c), 10) << "\n"
              << "tdr = " << fmt(tdr(c), 10) << "\n"
              << "fdr = " << fmt(fdr(c), 10) << "\n"
              << "tpr = " << fmt(tpr(c), 10) << "\n"
              << "fpr = " << fmt(fpr(c), 10) << "\n";
  });

  return run_parsed(app, argc, argv);
}

}  // namespace bmt
