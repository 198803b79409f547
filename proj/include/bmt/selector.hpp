#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/linalg.hpp"
#include "bmt/regression.hpp"

namespace bmt {

struct SelectionConfig {
  double p = 0.05;    // family-wise size parameter
  double c = 1.0;     // scale of f(n, delta) = c * n^delta
  double delta = 1.0; // stage-1 exponent
  std::optional<double> delta_star;  // stages >= 2; defaults to delta
  std::size_t max_stages = 0;        // 0 = automatic (min(n, T - q0 - 2))
  bool shrink_n_per_stage = true;    // n in c_p follows the active-set cardinality
  bool robust_se = false;
  bool add_intercept = true;
  bool allow_rank_deficient_post = false;

  double stage_exponent(std::size_t stage) const {
    return stage <= 1 ? delta : delta_star.value_or(delta);
  }
};

struct StageRecord {
  std::size_t stage = 0;                  // 1-based
  std::vector<std::size_t> active_set;    // candidates tested this stage
  std::vector<double> t_stats;            // aligned with active_set
  std::vector<unsigned char> degenerate;  // aligned; collinear with the conditioning set
  double threshold = 0.0;
  std::optional<std::size_t> chosen;      // single pick (boosted selection only)
  std::vector<std::size_t> admitted;      // everything admitted this stage
  std::size_t passed_count = 0;
};

struct SelectionResult {
  std::vector<std::size_t> selected;  // admission order
  std::vector<StageRecord> trace;
  RegressionFit post_fit;             // y on [intercept?, Z, X_selected]
  std::vector<double> coefficients_full;  // length n, zero off the selected set
  Matrix vcov_selected;               // block for the selected candidates, admission order
  double sigma2_hat = 0.0;
  double lambda = std::numeric_limits<double>::quiet_NaN();  // set by penalized methods
};

// c_p(n, delta) = Phi^{-1}(1 - p / (2 c n^delta)). Requires c n^delta > p/2 so
// the threshold is strictly positive.
double critical_value(double p, std::size_t n_active, double delta, double c);

// Boosted multiple-testing selection: each stage admits at most the single
// largest-|t| candidate clearing the stage threshold.
SelectionResult bmt_select(const Dataset& ds, const SelectionConfig& cfg);

// One-covariate-at-a-time baseline: each stage admits every candidate
// clearing the threshold.
SelectionResult ocmt_select(const Dataset& ds, const SelectionConfig& cfg);

struct PostSelection {
  RegressionFit fit;
  std::vector<double> coefficients_full;
  Matrix vcov_selected;
  double sigma2_hat = 0.0;
  bool rank_deficient = false;
};

PostSelection post_selection_estimate(const Dataset& ds,
                                      const std::vector<std::size_t>& selected,
                                      bool robust_se = false, bool add_intercept = true,
                                      bool allow_rank_deficient = false);

}  // namespace bmt
