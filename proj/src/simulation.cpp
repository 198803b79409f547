#include "bmt/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"
#include "bmt/lasso.hpp"

namespace bmt {

void DgpConfig::validate() const {
  if (k == 0) throw InvalidArgument("dgp: k must be at least 1");
  if (n < 2 * k + 1) throw InvalidArgument("dgp: n must be at least 2k + 1");
  if (t < 4) throw InvalidArgument("dgp: sample length too small");
  if (!(vif >= 1.0)) throw InvalidArgument("dgp: vif must be >= 1");
  if (!(pi >= 0.0 && pi <= 1.0)) throw InvalidArgument("dgp: pi must lie in [0,1]");
  if (!(r2_target > 0.0 && r2_target < 1.0))
    throw InvalidArgument("dgp: r2_target must lie in (0,1)");
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("dgp: |rho| must be < 1");
  if (!(std::abs(alpha) < 1.0)) throw InvalidArgument("dgp: |alpha| must be < 1");
  if (!beta.empty() && beta.size() != k)
    throw DimensionMismatch("dgp: beta must have length k");
  if (holdout == 0) throw InvalidArgument("dgp: holdout must be at least 1");
  for (double b : beta)
    if (!std::isfinite(b)) throw NonFinite("dgp: non-finite beta");
}

std::vector<double> DgpConfig::effective_beta() const {
  if (!beta.empty()) return beta;
  return std::vector<double>(k, 1.0);
}

FactorLoadings derive_loadings(double vif, std::size_t k, double pi) {
  if (!(vif >= 1.0)) throw InvalidArgument("derive_loadings: vif must be >= 1");
  if (k == 0) throw InvalidArgument("derive_loadings: k must be positive");
  if (!(pi >= 0.0 && pi <= 1.0)) throw InvalidArgument("derive_loadings: pi must lie in [0,1]");
  FactorLoadings out;
  out.gamma = (vif - 1.0) / static_cast<double>(k);
  out.nu_f = std::sqrt(pi * out.gamma);
  out.nu_g = std::sqrt((1.0 - pi) * out.gamma);
  return out;
}

double derive_noise_scale(double r2_target, const std::vector<double>& beta, double gamma) {
  if (!(r2_target > 0.0 && r2_target < 1.0))
    throw InvalidArgument("derive_noise_scale: r2_target must lie in (0,1)");
  if (beta.empty()) throw InvalidArgument("derive_noise_scale: beta is empty");
  if (!(gamma >= 0.0)) throw InvalidArgument("derive_noise_scale: gamma must be >= 0");
  double big_b = 0.0, b_s = 0.0;
  for (double b : beta) {
    big_b += b * b;
    b_s += b;
  }
  const double d = (big_b + gamma * b_s * b_s) / (1.0 + gamma);
  return std::sqrt(d * (1.0 - r2_target) / r2_target);
}

std::vector<double> generate_ar1(std::size_t length, double rho, CounterRng& rng) {
  if (!(std::abs(rho) < 1.0)) throw InvalidArgument("generate_ar1: |rho| must be < 1");
  std::vector<double> x(length);
  if (length == 0) return x;
  const double scale = std::sqrt(1.0 - rho * rho);
  x[0] = rng.normal();
  for (std::size_t i = 1; i < length; ++i) x[i] = rho * x[i - 1] + scale * rng.normal();
  return x;
}

DgpRealization generate_dgp(const DgpConfig& cfg, CounterRng& rng) {
  cfg.validate();
  const std::size_t k = cfg.k, n = cfg.n, t = cfg.t, s = cfg.holdout;
  const std::size_t total = cfg.burn_in + t + s;
  const std::vector<double> beta = cfg.effective_beta();

  DgpRealization r;
  const FactorLoadings ld = derive_loadings(cfg.vif, k, cfg.pi);
  r.derived.gamma = ld.gamma;
  r.derived.nu_f = ld.nu_f;
  r.derived.nu_g = ld.nu_g;
  for (double b : beta) {
    r.derived.big_b += b * b;
    r.derived.b_s += b;
  }
  r.derived.varsigma = derive_noise_scale(cfg.r2_target, beta, ld.gamma);

  const std::vector<double> f = generate_ar1(total, cfg.rho, rng);
  const std::vector<double> g = generate_ar1(total, cfg.rho, rng);
  Matrix eps(total, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<double> e = generate_ar1(total, cfg.rho, rng);
    std::copy(e.begin(), e.end(), eps.col(j));
  }
  std::vector<double> u(total);
  for (double& v : u) v = rng.normal();

  Matrix x(total, n);
  const double sig_norm = 1.0 / std::sqrt(1.0 + ld.gamma);
  const double noise_norm = 1.0 / std::sqrt(2.0 + ld.nu_f * ld.nu_f);
  for (std::size_t j = 0; j < n; ++j) {
    double* xc = x.col(j);
    if (j < 2 * k) {
      const double* ec = eps.col(j);
      for (std::size_t i = 0; i < total; ++i)
        xc[i] = (ec[i] + ld.nu_g * g[i] + ld.nu_f * f[i]) * sig_norm;
    } else {
      const double* prev = eps.col(j - 1);  // chained overlap across noise columns
      const double* ec = eps.col(j);
      for (std::size_t i = 0; i < total; ++i)
        xc[i] = (prev[i] + ec[i] + ld.nu_f * f[i]) * noise_norm;
    }
  }

  std::vector<double> y(total);
  double y_prev = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    double signal = 0.0;
    for (std::size_t j = 0; j < k; ++j) signal += beta[j] * x(i, j);
    y[i] = cfg.alpha * y_prev + signal + r.derived.varsigma * u[i];
    y_prev = y[i];
  }

  const std::size_t b0 = cfg.burn_in;
  r.dataset.y.assign(y.begin() + static_cast<std::ptrdiff_t>(b0),
                     y.begin() + static_cast<std::ptrdiff_t>(b0 + t));
  r.dataset.z = Matrix(t, 1);
  for (std::size_t i = 0; i < t; ++i)
    r.dataset.z(i, 0) = b0 + i > 0 ? y[b0 + i - 1] : 0.0;
  r.dataset.x = Matrix(t, n);
  for (std::size_t j = 0; j < n; ++j)
    std::copy(x.col(j) + b0, x.col(j) + b0 + t, r.dataset.x.col(j));

  r.y_holdout.assign(y.begin() + static_cast<std::ptrdiff_t>(b0 + t), y.end());
  r.z_holdout.resize(s);
  for (std::size_t i = 0; i < s; ++i) r.z_holdout[i] = y[b0 + t + i - 1];
  r.x_holdout = Matrix(s, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < s; ++i) r.x_holdout(i, j) = x(b0 + t + i, j);

  r.beta_true_full.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    r.signal_set.push_back(j);
    r.beta_true_full[j] = beta[j];
  }
  for (std::size_t j = k; j < 2 * k; ++j) r.pseudo_set.push_back(j);
  for (std::size_t j = 2 * k; j < n; ++j) r.noise_set.push_back(j);
  return r;
}

Dataset generate_wedge(std::size_t t, double alpha, double rho, double sigma,
                       CounterRng& rng) {
  if (!(2.0 * rho * rho < 1.0))
    throw InvalidArgument("generate_wedge: requires 2 rho^2 < 1");
  if (t < 4) throw InsufficientRows("generate_wedge: sample too small");
  Dataset ds;
  ds.y.resize(t);
  ds.x = Matrix(t, 3);
  const double mix = std::sqrt(1.0 - 2.0 * rho * rho);
  std::vector<double> x1(t), x2(t), e(t);
  for (std::size_t i = 0; i < t; ++i) x1[i] = rng.normal();
  for (std::size_t i = 0; i < t; ++i) x2[i] = rng.normal();
  for (std::size_t i = 0; i < t; ++i) e[i] = rng.normal();
  for (std::size_t i = 0; i < t; ++i) {
    ds.x(i, 0) = x1[i];
    ds.x(i, 1) = x2[i];
    ds.x(i, 2) = rho * x1[i] + rho * x2[i] + mix * e[i];
    ds.y[i] = x1[i] + alpha * x2[i] + sigma * rng.normal();
  }
  return ds;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> m = {Method::bmt, Method::ocmt, Method::lasso_bic,
                                        Method::lasso_cv, Method::adaptive_lasso};
  return m;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::bmt: return "bmt";
    case Method::ocmt: return "ocmt";
    case Method::lasso_bic: return "lasso_bic";
    case Method::lasso_cv: return "lasso_cv";
    case Method::adaptive_lasso: return "adaptive_lasso";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : all_methods())
    if (method_name(m) == name) return m;
  return std::nullopt;
}

namespace {

double forecast_one(const DgpRealization& real, const SelectionResult& sel,
                    bool add_intercept, std::size_t step) {
  const std::size_t offset = (add_intercept ? 1 : 0);
  double pred = add_intercept ? sel.post_fit.coefficients[0] : 0.0;
  pred += sel.post_fit.coefficients[offset] * real.z_holdout[step];  // lagged-y control
  for (std::size_t j = 0; j < real.beta_true_full.size(); ++j)
    if (sel.coefficients_full[j] != 0.0)
      pred += sel.coefficients_full[j] * real.x_holdout(step, j);
  return pred;
}

MetricsReport score_method(const DgpRealization& real, const SelectionResult& sel,
                           bool add_intercept) {
  MetricsReport rep;
  const ConfusionCounts c =
      confusion(sel.selected, real.signal_set, real.beta_true_full.size());
  rep.mcc = mcc(c);
  rep.f1 = f1(c);
  rep.tdr = tdr(c);
  rep.fdr = fdr(c);
  rep.tpr = tpr(c);
  rep.fpr = fpr(c);
  rep.model_size = static_cast<double>(sel.selected.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < real.beta_true_full.size(); ++j) {
    const double d = sel.coefficients_full[j] - real.beta_true_full[j];
    acc += d * d;
  }
  rep.rmse = std::sqrt(acc);

  std::vector<double> pred(real.y_holdout.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    pred[i] = forecast_one(real, sel, add_intercept, i);
  rep.rmsfe = rmsfe(real.y_holdout, pred);
  return rep;
}

}  // namespace

SelectionResult run_method(Method m, const Dataset& ds, const SelectionConfig& selcfg,
                           const LassoConfig& lasso_cfg) {
  switch (m) {
    case Method::bmt: return bmt_select(ds, selcfg);
    case Method::ocmt: return ocmt_select(ds, selcfg);
    case Method::lasso_bic: return lasso_select_bic(ds, lasso_cfg);
    case Method::lasso_cv: return lasso_select_cv(ds, lasso_cfg);
    case Method::adaptive_lasso: return adaptive_lasso_select(ds, lasso_cfg);
  }
  throw InvalidArgument("run_method: unknown method");
}

std::map<Method, MetricsReport> run_replication(const DgpConfig& cfg,
                                                const std::vector<Method>& methods,
                                                const SelectionConfig& selcfg) {
  CounterRng rng(cfg.seed);
  const DgpRealization real = generate_dgp(cfg, rng);

  SelectionConfig sc = selcfg;
  sc.allow_rank_deficient_post = true;  // saturated baselines must still report
  LassoConfig lc;
  lc.add_intercept = sc.add_intercept;
  lc.allow_rank_deficient_post = true;
  lc.cv_seed = cfg.seed;

  std::map<Method, MetricsReport> out;
  for (Method m : methods)
    out[m] = score_method(real, run_method(m, real.dataset, sc, lc), sc.add_intercept);
  return out;
}

std::vector<DesignSummary> run_grid(const std::vector<DgpConfig>& designs, std::size_t reps,
                                    const std::vector<Method>& methods,
                                    const SelectionConfig& selcfg, std::size_t workers,
                                    std::uint64_t master_seed) {
  if (reps == 0) throw InvalidArgument("run_grid: reps must be at least 1");
  if (designs.empty()) return {};
  for (const auto& d : designs) d.validate();

  const std::size_t total = designs.size() * reps;
  std::vector<std::map<Method, MetricsReport>> slots(total);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  const auto work = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= total || failed.load()) return;
      const std::size_t design_idx = idx / reps;
      const std::size_t rep_idx = idx % reps;
      DgpConfig cfg = designs[design_idx];
      cfg.seed = CounterRng::derive_key(master_seed, design_idx, rep_idx);
      try {
        slots[idx] = run_replication(cfg, methods, selcfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
        return;
      }
    }
  };

  std::size_t nw = workers;
  if (nw == 0) nw = std::max(1u, std::thread::hardware_concurrency());
  nw = std::min(nw, total);
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw Error("run_grid: replication failed: " + first_error);

  std::vector<DesignSummary> out(designs.size());
  for (std::size_t d = 0; d < designs.size(); ++d) {
    out[d].config = designs[d];
    out[d].config.seed = master_seed;
    out[d].reps = reps;
    for (Method m : methods) {
      std::vector<MetricsReport> per_rep;
      per_rep.reserve(reps);
      for (std::size_t r = 0; r < reps; ++r) per_rep.push_back(slots[d * reps + r].at(m));
      out[d].by_method[m] = aggregate_reports(per_rep);
    }
  }
  return out;
}

}  // namespace bmt
