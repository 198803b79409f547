#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/metrics.hpp"
#include "bmt/rng.hpp"
#include "bmt/selector.hpp"

namespace bmt {

struct DgpConfig {
  std::size_t t = 100;    // estimation sample length
  std::size_t n = 0;      // candidate count, must be >= 2k + 1
  std::size_t k = 4;      // signals (and pseudo-signals)
  double alpha = 0.8;     // AR coefficient of the target
  double r2_target = 0.7;
  double rho = 0.6;       // AR coefficient of factors and idiosyncratics
  double vif = 1.0;
  double pi = 0.0;        // share of factor variance on the global factor
  std::vector<double> beta;  // length k; empty means all ones
  std::size_t burn_in = 200;
  std::size_t holdout = 1;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<double> effective_beta() const;
};

struct DgpDerived {
  double gamma = 0.0;
  double nu_f = 0.0;
  double nu_g = 0.0;
  double varsigma = 0.0;
  double big_b = 0.0;  // sum of squared betas
  double b_s = 0.0;    // sum of betas
};

struct DgpRealization {
  Dataset dataset;  // y over the estimation window; Z is the single lagged-y column
  std::vector<double> y_holdout;
  Matrix x_holdout;               // holdout x holdout-row candidates
  std::vector<double> z_holdout;  // lagged y entering each holdout period
  std::vector<std::size_t> signal_set;
  std::vector<std::size_t> pseudo_set;
  std::vector<std::size_t> noise_set;
  std::vector<double> beta_true_full;
  DgpDerived derived;
};

struct FactorLoadings {
  double nu_f = 0.0;
  double nu_g = 0.0;
  double gamma = 0.0;
};

// gamma = (vif - 1) / k; nu_f = sqrt(pi * gamma); nu_g = sqrt((1 - pi) * gamma)
FactorLoadings derive_loadings(double vif, std::size_t k, double pi);

// Noise scale matching the target conditional R-squared. The population
// variance of the signal combination under the factor design is
// D = (B + gamma * b_s^2) / (1 + gamma), and varsigma = sqrt(D (1 - R2) / R2).
double derive_noise_scale(double r2_target, const std::vector<double>& beta, double gamma);

// Stationary AR(1) with unit variance: x_0 ~ N(0,1), x_t = rho x_{t-1} + sqrt(1-rho^2) v_t.
std::vector<double> generate_ar1(std::size_t length, double rho, CounterRng& rng);

// Draw order contract (fixed for reproducibility): global factor f, local
// factor g, idiosyncratics eps_1..eps_n, then the target shocks u; each series
// spans burn_in + t + holdout periods.
DgpRealization generate_dgp(const DgpConfig& cfg, CounterRng& rng);

// Three-regressor wedge design: y = x1 + alpha x2 + sigma u with x1, x2
// independent unit-variance and x3 = rho x1 + rho x2 + sqrt(1 - 2 rho^2) e.
// Requires 2 rho^2 < 1. No controls.
Dataset generate_wedge(std::size_t t, double alpha, double rho, double sigma, CounterRng& rng);

enum class Method { bmt, ocmt, lasso_bic, lasso_cv, adaptive_lasso };

const std::vector<Method>& all_methods();
std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct LassoConfig;  // bmt/lasso.hpp

// Uniform dispatcher used by the Monte Carlo driver, the forecasting
// workflow, and the CLI.
SelectionResult run_method(Method m, const Dataset& ds, const SelectionConfig& selcfg,
                           const LassoConfig& lasso_cfg);

// One DGP draw, every requested method, metrics against the signal set.
// Selection runs with rank-deficient post-fits permitted so saturated
// baselines still report.
std::map<Method, MetricsReport> run_replication(const DgpConfig& cfg,
                                                const std::vector<Method>& methods,
                                                const SelectionConfig& selcfg);

struct DesignSummary {
  DgpConfig config;
  std::size_t reps = 0;
  std::map<Method, MetricsReport> by_method;
};

// Per-replication seeds derive from (master_seed, design index, rep index),
// so results do not depend on the worker count.
std::vector<DesignSummary> run_grid(const std::vector<DgpConfig>& designs, std::size_t reps,
                                    const std::vector<Method>& methods,
                                    const SelectionConfig& selcfg, std::size_t workers,
                                    std::uint64_t master_seed);

}  // namespace bmt
