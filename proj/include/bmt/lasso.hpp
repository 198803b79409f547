#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/linalg.hpp"
#include "bmt/selector.hpp"

namespace bmt {

struct LassoPath {
  std::vector<double> lambdas;    // strictly decreasing
  Matrix coefficients;            // n x n_lambda, original scale, one column per path point
  std::vector<double> intercepts;
  std::vector<std::size_t> active_counts;
  std::vector<double> col_means;
  std::vector<double> col_scales;  // population sd; 0 marks a constant column
  double y_mean = 0.0;
};

// Coordinate-descent path for (1/2T)||y - b0 - X b||^2 + lambda ||b||_1.
// Columns are standardized internally; reported coefficients are on the
// original scale. lambdas run from lambda_max down to lambda_min_ratio times it.
LassoPath lasso_path(const std::vector<double>& y, const Matrix& x,
                     std::size_t n_lambda = 100, double lambda_min_ratio = 1e-3);

// Max KKT violation of path point l, measured on the standardized problem.
double max_kkt_violation(const std::vector<double>& y, const Matrix& x,
                         const LassoPath& path, std::size_t l);

struct LassoConfig {
  std::size_t n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  std::size_t folds = 10;
  bool add_intercept = true;
  std::uint64_t cv_seed = 0;
  bool shuffle_folds = false;  // default contiguous time blocks
  bool allow_rank_deficient_post = false;
};

// All three selectors partial the controls (and intercept) out of y and every
// candidate first, run the path on the filtered data, pick a path point, and
// report post-selection OLS coefficients on the original dataset.
SelectionResult lasso_select_bic(const Dataset& ds, const LassoConfig& cfg = {});
SelectionResult lasso_select_cv(const Dataset& ds, const LassoConfig& cfg = {});
SelectionResult adaptive_lasso_select(const Dataset& ds, const LassoConfig& cfg = {});

// Mean out-of-fold squared error per path point, exposed for oracle tests.
std::vector<double> lasso_cv_curve(const Dataset& ds, const LassoConfig& cfg,
                                   std::vector<double>* lambdas_out = nullptr);

}  // namespace bmt
