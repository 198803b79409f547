#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/lasso.hpp"
#include "bmt/selector.hpp"
#include "bmt/simulation.hpp"

namespace bmt {

struct DesignOptions {
  bool add_constant = false;  // usually left to the selector intercept
  bool add_trend = false;
  std::size_t lag_target = 0;          // y lags appended to the controls
  std::size_t lags_of_candidates = 0;  // lagged candidate copies appended to X
  bool standardize = false;            // candidates (and trend), recorded for back-transform
  bool add_first_pc = false;           // first PC of the candidate block, appended to Z
};

struct BuiltDesign {
  Dataset dataset;
  std::vector<std::string> control_names;
  std::vector<double> x_means;   // identity (0/1) when standardize is off
  std::vector<double> x_scales;
};

// Row trimming (for lags) happens first, then candidate lags, then the PC,
// then standardization. Derived controls keep their construction order:
// [existing Z, constant, trend, y lags, first PC].
BuiltDesign build_design(const Dataset& input, const DesignOptions& opt);

struct ForecastStat {
  std::size_t horizon = 1;
  double rmsfe = 0.0;
  double r2_oos = 0.0;
};

struct MethodReport {
  std::string method;
  std::vector<std::size_t> selected;  // 0-based candidate indices, admission order
  std::vector<std::string> selected_names;
  std::vector<double> coefficients;  // post-selection OLS, aligned with selected
  std::vector<double> se;
  std::vector<double> t_stats;
  double lambda = 0.0;  // penalized methods; NaN otherwise
  double rmse_in_sample = 0.0;
  double bic = 0.0;
  std::vector<ForecastStat> forecasts;
};

struct ReportBundle {
  std::string version;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t rows_used = 0;
  std::size_t rows_dropped = 0;
  std::vector<MethodReport> methods;
};

// Selection summary on the full sample (no forecasting).
MethodReport summarize_selection(const Dataset& ds, const SelectionResult& sel,
                                 Method method, bool add_intercept);

struct ForecastSplit {
  double train_fraction = 0.8;   // used when train_length == 0
  std::size_t train_length = 0;
};

// Selects and fits on the training window only, then produces direct
// h-step forecasts for the evaluation window. RMSFE covers the first
// min(h, eval length) evaluation points; R2_OOS covers the whole window
// against the training-mean benchmark.
ReportBundle forecast_evaluate(const Dataset& ds, const ForecastSplit& split,
                               const std::vector<Method>& methods,
                               const std::vector<std::size_t>& horizons,
                               const SelectionConfig& selcfg, const LassoConfig& lasso_cfg);

}  // namespace bmt
