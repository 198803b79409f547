#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/errors.hpp"
#include "bmt/lasso.hpp"
#include "bmt/linalg.hpp"
#include "oracles.hpp"

using namespace bmt;

namespace {

double soft_threshold(double z, double g) {
  if (z > g) return z - g;
  if (z < -g) return z + g;
  return 0.0;
}

// Columns with exact zero mean, unit population sd, and zero cross products:
// plus/minus blocks on disjoint rows.
Matrix orthogonal_design(std::size_t block, std::size_t n_cols) {
  const std::size_t t = 2 * block * n_cols;
  Matrix x(t, n_cols);
  const double v = std::sqrt(static_cast<double>(t) / (2.0 * block));
  for (std::size_t j = 0; j < n_cols; ++j)
    for (std::size_t b = 0; b < block; ++b) {
      x(2 * block * j + 2 * b, j) = v;
      x(2 * block * j + 2 * b + 1, j) = -v;
    }
  return x;
}

// truth lives on columns 1, 6 and 11, so n must be at least 12
Dataset easy_sparse_dataset(std::uint64_t seed, std::size_t t, std::size_t n) {
  oracle::TestRng rng(seed);
  Dataset ds;
  ds.z = Matrix(t, 0);
  ds.x = oracle::random_matrix(rng, t, n);
  ds.y.resize(t);
  for (std::size_t i = 0; i < t; ++i)
    ds.y[i] = 3.0 * ds.x(i, 1) - 2.0 * ds.x(i, 6) + 1.5 * ds.x(i, 11) + rng.normal();
  return ds;
}

}  // namespace

TEST_CASE("orthogonal design reproduces the soft-threshold closed form") {
  const std::size_t block = 4, n = 5;
  const Matrix x = orthogonal_design(block, n);
  const std::size_t t = x.rows();
  oracle::TestRng rng(17);
  std::vector<double> y(t);
  const std::vector<double> truth = {2.0, 0.0, -1.0, 0.5, 0.0};
  for (std::size_t i = 0; i < t; ++i) {
    y[i] = 0.05 * rng.normal();
    for (std::size_t j = 0; j < n; ++j) y[i] += truth[j] * x(i, j);
  }

  const LassoPath path = lasso_path(y, x, 20, 1e-2);
  REQUIRE(path.lambdas.size() == 20);
  // z_j = x_j'y / T is invariant along the path for an orthogonal design
  std::vector<double> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    double ym = oracle::mean(y);
    for (std::size_t i = 0; i < t; ++i) s += x(i, j) * (y[i] - ym);
    z[j] = s / static_cast<double>(t);
  }
  for (std::size_t l = 0; l < path.lambdas.size(); ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const double expected = soft_threshold(z[j], path.lambdas[l]);
      CHECK(path.coefficients(j, l) == doctest::Approx(expected).epsilon(1e-7));
    }
  }
}

TEST_CASE("the path starts empty exactly at lambda_max") {
  const Dataset ds = easy_sparse_dataset(5, 80, 15);
  const LassoPath path = lasso_path(ds.y, ds.x, 50, 1e-3);
  CHECK(path.active_counts.front() == 0);
  CHECK(path.active_counts.back() > 0);
  // lambdas strictly decreasing
  for (std::size_t l = 1; l < path.lambdas.size(); ++l)
    CHECK(path.lambdas[l] < path.lambdas[l - 1]);
}

TEST_CASE("every path point satisfies the KKT conditions") {
  const Dataset ds = easy_sparse_dataset(29, 90, 25);
  const LassoPath path = lasso_path(ds.y, ds.x, 40, 1e-3);
  for (std::size_t l = 0; l < path.lambdas.size(); ++l)
    CHECK(max_kkt_violation(ds.y, ds.x, path, l) < 1e-6);
}

TEST_CASE("the solution at a shared grid point does not depend on the path taken") {
  const Dataset ds = easy_sparse_dataset(31, 70, 12);
  const LassoPath path = lasso_path(ds.y, ds.x, 30, 1e-3);
  const std::size_t l = 17;
  // a second path whose endpoint coincides with the mid-path lambda above
  const LassoPath other = lasso_path(ds.y, ds.x, 30, path.lambdas[l] / path.lambdas[0]);
  CHECK(other.lambdas.back() == doctest::Approx(path.lambdas[l]).epsilon(1e-12));
  for (std::size_t j = 0; j < ds.x.cols(); ++j)
    CHECK(other.coefficients(j, 29) ==
          doctest::Approx(path.coefficients(j, l)).epsilon(1e-6));
}

TEST_CASE("bic selection matches a brute-force scan of the path") {
  const Dataset ds = easy_sparse_dataset(43, 100, 20);
  LassoConfig cfg;
  const SelectionResult res = lasso_select_bic(ds, cfg);

  // recompute the criterion externally from a fresh path on centered data
  const LassoPath path = lasso_path(ds.y, ds.x, cfg.n_lambda, cfg.lambda_min_ratio);
  const std::size_t t = ds.rows();
  double best = 1e300;
  std::size_t best_l = 0;
  for (std::size_t l = 0; l < path.lambdas.size(); ++l) {
    double rss = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      double fit = path.intercepts[l];
      for (std::size_t j = 0; j < 20; ++j) fit += path.coefficients(j, l) * ds.x(i, j);
      rss += (ds.y[i] - fit) * (ds.y[i] - fit);
    }
    const double bic = t * std::log(rss / t) + path.active_counts[l] * std::log(static_cast<double>(t));
    if (bic < best - 1e-12) {
      best = bic;
      best_l = l;
    }
  }
  std::vector<std::size_t> expected;
  for (std::size_t j = 0; j < 20; ++j)
    if (path.coefficients(j, best_l) != 0.0) expected.push_back(j);
  auto sel = res.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(sel == expected);
  CHECK(res.lambda == doctest::Approx(path.lambdas[best_l]).epsilon(1e-10));
}

TEST_CASE("bic selection recovers an easy sparse truth") {
  const Dataset ds = easy_sparse_dataset(7, 120, 18);
  const auto res = lasso_select_bic(ds, {});
  auto sel = res.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(std::binary_search(sel.begin(), sel.end(), 1));
  CHECK(std::binary_search(sel.begin(), sel.end(), 6));
  CHECK(std::binary_search(sel.begin(), sel.end(), 11));
  // post-selection refit, not the shrunken path coefficients
  const auto post = post_selection_estimate(ds, res.selected);
  for (std::size_t j = 0; j < res.selected.size(); ++j)
    CHECK(res.post_fit.coefficients[1 + j] ==
          doctest::Approx(post.fit.coefficients[1 + j]).epsilon(1e-12));
}

TEST_CASE("cross-validation averages out-of-fold errors over the pinned grid") {
  const Dataset ds = easy_sparse_dataset(61, 60, 14);
  LassoConfig cfg;
  cfg.folds = 5;
  cfg.n_lambda = 25;
  std::vector<double> lambdas;
  const std::vector<double> curve = lasso_cv_curve(ds, cfg, &lambdas);
  REQUIRE(curve.size() == 25);
  REQUIRE(lambdas.size() == 25);

  // the curve must be finite everywhere and the selector must report its argmin
  double mn = curve[0];
  std::size_t arg = 0;
  for (std::size_t l = 0; l < curve.size(); ++l) {
    CHECK(std::isfinite(curve[l]));
    if (curve[l] < mn) {
      mn = curve[l];
      arg = l;
    }
  }
  // the chosen lambda of the full selector equals the curve argmin
  const auto res = lasso_select_cv(ds, cfg);
  CHECK(res.lambda == doctest::Approx(lambdas[arg]).epsilon(1e-12));
  // and the easy signals are all in
  auto sel = res.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(std::binary_search(sel.begin(), sel.end(), 1));
  CHECK(std::binary_search(sel.begin(), sel.end(), 6));
}

TEST_CASE("cv fold assignment is deterministic given the seed") {
  const Dataset ds = easy_sparse_dataset(77, 50, 15);
  LassoConfig cfg;
  cfg.folds = 5;
  cfg.shuffle_folds = true;
  cfg.cv_seed = 99;
  const auto a = lasso_cv_curve(ds, cfg, nullptr);
  const auto b = lasso_cv_curve(ds, cfg, nullptr);
  CHECK(a == b);
  cfg.cv_seed = 100;
  const auto c = lasso_cv_curve(ds, cfg, nullptr);
  CHECK(a != c);
}

TEST_CASE("controls are partialled out before the penalty sees the candidates") {
  oracle::TestRng rng(83);
  const std::size_t t = 100;
  Dataset ds;
  ds.z = oracle::random_matrix(rng, t, 1);
  ds.x = Matrix(t, 6);
  ds.y.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < 6; ++j) ds.x(i, j) = rng.normal();
    // candidate 3 equals the control plus noise: nothing left after partialling
    ds.x(i, 3) = 0.999 * ds.z(i, 0) + 0.05 * rng.normal();
    ds.y[i] = 4.0 * ds.z(i, 0) + 1.5 * ds.x(i, 0) + 0.7 * rng.normal();
  }
  const auto res = lasso_select_bic(ds, {});
  auto sel = res.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(std::binary_search(sel.begin(), sel.end(), 0));
  CHECK_FALSE(std::binary_search(sel.begin(), sel.end(), 3));
}

TEST_CASE("adaptive lasso keeps strong signals and drops boundary noise") {
  // correlated distractors that plain lasso tends to drag in
  oracle::TestRng rng(71);
  const std::size_t t = 150, n = 30;
  Dataset ds;
  ds.z = Matrix(t, 0);
  ds.x = Matrix(t, n);
  ds.y.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    const double common = rng.normal();
    for (std::size_t j = 0; j < n; ++j) ds.x(i, j) = 0.6 * common + 0.8 * rng.normal();
    ds.y[i] = 2.5 * ds.x(i, 2) - 2.0 * ds.x(i, 9) + rng.normal();
  }
  const auto ada = adaptive_lasso_select(ds, {});
  auto sel = ada.selected;
  std::sort(sel.begin(), sel.end());
  CHECK(std::binary_search(sel.begin(), sel.end(), 2));
  CHECK(std::binary_search(sel.begin(), sel.end(), 9));
  // the reweighted fit should not be larger than the plain BIC fit here
  const auto plain = lasso_select_bic(ds, {});
  CHECK(ada.selected.size() <= plain.selected.size());
}

TEST_CASE("a constant candidate column is never selected") {
  Dataset ds = easy_sparse_dataset(55, 60, 14);
  for (std::size_t i = 0; i < 60; ++i) ds.x(i, 4) = 7.0;
  const auto bic = lasso_select_bic(ds, {});
  const auto cv = lasso_select_cv(ds, {});
  for (std::size_t idx : bic.selected) CHECK(idx != 4);
  for (std::size_t idx : cv.selected) CHECK(idx != 4);
}

TEST_CASE("an all-noise target selects nothing or nearly nothing under bic") {
  oracle::TestRng rng(90);
  Dataset ds;
  ds.z = Matrix(80, 0);
  ds.x = oracle::random_matrix(rng, 80, 30);
  ds.y = oracle::random_vector(rng, 80);
  const auto res = lasso_select_bic(ds, {});
  CHECK(res.selected.size() <= 2);
}

TEST_CASE("degenerate inputs yield an empty selection, not a crash") {
  Dataset ds;
  ds.y.assign(40, 1.0);        // constant target
  ds.z = Matrix(40, 0);
  ds.x = Matrix(40, 3, 0.0);   // all-zero candidates
  const auto res = lasso_select_bic(ds, {});
  CHECK(res.selected.empty());
}
