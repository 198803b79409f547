#include "bmt/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"
#include "bmt/regression.hpp"
#include "bmt/rng.hpp"

namespace bmt {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

// Cyclic coordinate descent on centered data with arbitrary column scales,
// in covariance-update form: the gradient vector g = x'(y - xb)/T is kept
// current incrementally from cached Gram rows of the variables that have
// ever been active, so a sweep costs O(n) plus O(n) per coefficient that
// actually moves, with no O(T) work after the one-time caching. col_sq
// holds the sum of squares per column; zero marks a dead column.
struct CdEngine {
  const Matrix& x;
  const std::vector<double>& col_sq;
  std::size_t t;
  std::size_t max_sweeps = 100000;
  double tol = 1e-8;
  std::size_t sweeps_used = 0;

  std::vector<double> g;                   // x_j'(y - xb) / T, maintained
  std::vector<std::vector<double>> gram;   // gram[a][j] = x_a'x_j / T, lazy
  std::vector<unsigned char> cached;

  void init(const std::vector<double>& y) {
    const std::size_t n = x.cols();
    const double td = static_cast<double>(t);
    g.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (col_sq[j] > 0.0) g[j] = kernels::dot(x.col(j), y.data(), t) / td;
    gram.assign(n, {});
    cached.assign(n, 0);
  }

  void cache_gram(std::size_t a) {
    if (cached[a]) return;
    cached[a] = 1;
    const double td = static_cast<double>(t);
    gram[a].assign(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (col_sq[j] > 0.0) gram[a][j] = kernels::dot(x.col(a), x.col(j), t) / td;
  }

  double sweep(std::vector<double>& b, double lambda, bool active_only) {
    double delta = 0.0;
    const std::size_t n = x.cols();
    const double td = static_cast<double>(t);
    for (std::size_t j = 0; j < n; ++j) {
      if (col_sq[j] <= 0.0) continue;
      if (active_only && b[j] == 0.0) continue;
      const double q = col_sq[j] / td;
      const double z = g[j] + q * b[j];
      const double bn = soft_threshold(z, lambda) / q;
      const double diff = bn - b[j];
      if (diff != 0.0) {
        // Entering variables get their Gram row here; leaving or moving ones
        // were active before, so the row is already cached.
        if (bn != 0.0) cache_gram(j);
        b[j] = bn;
        kernels::axpy(-diff, gram[j].data(), g.data(), n);
        delta = std::max(delta, std::abs(diff) * std::sqrt(q));
      }
    }
    return delta;
  }

  void solve(std::vector<double>& b, double lambda) {
    while (sweeps_used < max_sweeps) {
      ++sweeps_used;
      if (sweep(b, lambda, false) < tol) return;
      while (sweeps_used < max_sweeps) {
        ++sweeps_used;
        if (sweep(b, lambda, true) < tol) break;
      }
    }
  }
};

struct RawPath {
  std::vector<double> lambdas;
  Matrix coef;  // n x L, engine column scale
  std::vector<std::size_t> active_counts;
};

std::vector<double> lambda_grid(double lambda_max, std::size_t n_lambda, double ratio) {
  if (lambda_max <= 0.0) lambda_max = 1e-3;  // degenerate target: path stays all-zero
  std::vector<double> g(n_lambda);
  if (n_lambda == 1) {
    g[0] = lambda_max;
    return g;
  }
  const double step = std::log(ratio) / static_cast<double>(n_lambda - 1);
  for (std::size_t l = 0; l < n_lambda; ++l)
    g[l] = lambda_max * std::exp(step * static_cast<double>(l));
  return g;
}

RawPath cd_path(const Matrix& x, const std::vector<double>& col_sq,
                const std::vector<double>& y, std::size_t n_lambda, double ratio,
                const std::vector<double>* fixed_grid = nullptr) {
  const std::size_t t = y.size(), n = x.cols();
  RawPath p;
  if (fixed_grid) {
    p.lambdas = *fixed_grid;
  } else {
    double lmax = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (col_sq[j] > 0.0)
        lmax = std::max(lmax, std::abs(kernels::dot(x.col(j), y.data(), t)) /
                                  static_cast<double>(t));
    p.lambdas = lambda_grid(lmax, n_lambda, ratio);
  }
  const std::size_t len = p.lambdas.size();
  p.coef = Matrix(n, len);
  p.active_counts.assign(len, 0);

  CdEngine engine{x, col_sq, t};
  engine.init(y);
  std::vector<double> b(n, 0.0);
  for (std::size_t l = 0; l < len; ++l) {
    engine.solve(b, p.lambdas[l]);
    std::size_t act = 0;
    for (std::size_t j = 0; j < n; ++j) {
      p.coef(j, l) = b[j];
      if (b[j] != 0.0) ++act;
    }
    p.active_counts[l] = act;
  }
  return p;
}

}  // namespace

LassoPath lasso_path(const std::vector<double>& y, const Matrix& x, std::size_t n_lambda,
                     double lambda_min_ratio) {
  const std::size_t t = y.size(), n = x.cols();
  if (t < 3) throw InsufficientRows("lasso_path: need at least 3 rows");
  if (x.rows() != t) throw DimensionMismatch("lasso_path: row mismatch");
  if (n_lambda == 0) throw InvalidArgument("lasso_path: n_lambda must be positive");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio <= 1.0))
    throw InvalidArgument("lasso_path: lambda_min_ratio must lie in (0,1]");
  for (double v : y)
    if (!std::isfinite(v)) throw NonFinite("lasso_path: non-finite target value");

  LassoPath out;
  out.y_mean = mean_of(y.data(), t);
  std::vector<double> yc(t);
  for (std::size_t i = 0; i < t; ++i) yc[i] = y[i] - out.y_mean;

  Matrix xs(t, n);
  out.col_means.resize(n);
  out.col_scales.resize(n);
  std::vector<double> col_sq(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* c = x.col(j);
    for (std::size_t i = 0; i < t; ++i)
      if (!std::isfinite(c[i])) throw NonFinite("lasso_path: non-finite candidate value");
    const double m = mean_of(c, t);
    const double sd = std::sqrt(variance_of(c, t));
    out.col_means[j] = m;
    out.col_scales[j] = sd;
    if (sd > 0.0) {
      const double inv = 1.0 / sd;
      for (std::size_t i = 0; i < t; ++i) xs(i, j) = (c[i] - m) * inv;
      col_sq[j] = static_cast<double>(t);
    } else {
      for (std::size_t i = 0; i < t; ++i) xs(i, j) = 0.0;
      col_sq[j] = 0.0;
    }
  }

  RawPath rp = cd_path(xs, col_sq, yc, n_lambda, lambda_min_ratio);
  out.lambdas = std::move(rp.lambdas);
  out.active_counts = std::move(rp.active_counts);
  out.coefficients = Matrix(n, out.lambdas.size());
  out.intercepts.assign(out.lambdas.size(), 0.0);
  for (std::size_t l = 0; l < out.lambdas.size(); ++l) {
    double dot_means = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double bo = out.col_scales[j] > 0.0 ? rp.coef(j, l) / out.col_scales[j] : 0.0;
      out.coefficients(j, l) = bo;
      dot_means += bo * out.col_means[j];
    }
    out.intercepts[l] = out.y_mean - dot_means;
  }
  return out;
}

double max_kkt_violation(const std::vector<double>& y, const Matrix& x,
                         const LassoPath& path, std::size_t l) {
  const std::size_t t = y.size(), n = x.cols();
  if (l >= path.lambdas.size()) throw IndexOutOfRange("max_kkt_violation: path index");
  const double lambda = path.lambdas[l];
  std::vector<double> r(t);
  for (std::size_t i = 0; i < t; ++i) r[i] = y[i] - path.intercepts[l];
  for (std::size_t j = 0; j < n; ++j) {
    const double bo = path.coefficients(j, l);
    if (bo != 0.0) kernels::axpy(-bo, x.col(j), r.data(), t);
  }
  double worst = 0.0;
  std::vector<double> xsj(t);
  for (std::size_t j = 0; j < n; ++j) {
    if (path.col_scales[j] <= 0.0) continue;
    const double inv = 1.0 / path.col_scales[j];
    const double* c = x.col(j);
    for (std::size_t i = 0; i < t; ++i) xsj[i] = (c[i] - path.col_means[j]) * inv;
    const double g = kernels::dot(xsj.data(), r.data(), t) / static_cast<double>(t);
    const double b_std = path.coefficients(j, l) * path.col_scales[j];
    const double v = b_std == 0.0 ? std::max(0.0, std::abs(g) - lambda)
                                  : std::abs(g - lambda * (b_std > 0.0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

struct FilteredProblem {
  std::vector<double> yt;      // target after the controls are partialled out
  Matrix xs;                   // candidates, partialled out and rescaled to rms 1
  std::vector<double> scales;  // rms of each partialled column; 0 = dead
  std::vector<double> col_sq;  // t for live columns, 0 for dead ones
};

FilteredProblem filter_problem(const Dataset& ds, bool add_intercept) {
  ds.validate();
  const std::size_t t = ds.rows(), n = ds.n_candidates();
  StagewiseProjector proj(t);
  if (add_intercept) {
    const std::vector<double> ones(t, 1.0);
    proj.absorb(ones.data());
  }
  for (std::size_t j = 0; j < ds.z.cols(); ++j)
    if (!proj.absorb(ds.z.col(j)))
      throw RankDeficient("control column " + std::to_string(j + 1) + " is collinear");

  FilteredProblem fp;
  fp.yt = ds.y;
  proj.residualize(fp.yt.data());
  fp.xs = Matrix(t, n);
  fp.scales.resize(n);
  fp.col_sq.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::memcpy(fp.xs.col(j), ds.x.col(j), t * sizeof(double));
    proj.residualize(fp.xs.col(j));
    const double rms =
        std::sqrt(kernels::sumsq(fp.xs.col(j), t) / static_cast<double>(t));
    fp.scales[j] = rms;
    if (rms > 0.0) {
      const double inv = 1.0 / rms;
      for (std::size_t i = 0; i < t; ++i) fp.xs(i, j) *= inv;
      fp.col_sq[j] = static_cast<double>(t);
    } else {
      for (std::size_t i = 0; i < t; ++i) fp.xs(i, j) = 0.0;
      fp.col_sq[j] = 0.0;
    }
  }
  return fp;
}

// BIC = T ln(RSS/T) + df ln(T); ties resolve to the larger lambda.
std::size_t pick_bic(const RawPath& rp, const Matrix& xs, const std::vector<double>& yt) {
  const std::size_t t = yt.size();
  std::size_t best = 0;
  double best_bic = 0.0;
  std::vector<double> r(t);
  for (std::size_t l = 0; l < rp.lambdas.size(); ++l) {
    r = yt;
    for (std::size_t j = 0; j < xs.cols(); ++j)
      if (rp.coef(j, l) != 0.0) kernels::axpy(-rp.coef(j, l), xs.col(j), r.data(), t);
    const double rss = kernels::sumsq(r.data(), t);
    const double td = static_cast<double>(t);
    const double bic = td * std::log(std::max(rss / td, 1e-300)) +
                       static_cast<double>(rp.active_counts[l]) * std::log(td);
    if (l == 0 || bic < best_bic) {
      best_bic = bic;
      best = l;
    }
  }
  return best;
}

std::vector<std::size_t> active_set_at(const RawPath& rp, std::size_t l) {
  std::vector<std::size_t> sel;
  for (std::size_t j = 0; j < rp.coef.rows(); ++j)
    if (rp.coef(j, l) != 0.0) sel.push_back(j);
  return sel;
}

SelectionResult finish_selection(const Dataset& ds, std::vector<std::size_t> selected,
                                 const LassoConfig& cfg, double lambda) {
  SelectionResult res;
  res.selected = std::move(selected);
  res.lambda = lambda;
  PostSelection post = post_selection_estimate(ds, res.selected, false, cfg.add_intercept,
                                               cfg.allow_rank_deficient_post);
  res.post_fit = std::move(post.fit);
  res.coefficients_full = std::move(post.coefficients_full);
  res.vcov_selected = std::move(post.vcov_selected);
  res.sigma2_hat = post.sigma2_hat;
  return res;
}

std::vector<std::size_t> fold_ids(std::size_t t, std::size_t folds, bool shuffle,
                                  std::uint64_t seed) {
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    CounterRng rng(CounterRng::derive_key(seed, 0xCFu));
    for (std::size_t i = t; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(order[i - 1], order[j]);
    }
  }
  std::vector<std::size_t> id(t);
  const std::size_t base = t / folds, rem = t % folds;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = base + (f < rem ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) id[order[pos++]] = f;
  }
  return id;
}

}  // namespace

SelectionResult lasso_select_bic(const Dataset& ds, const LassoConfig& cfg) {
  FilteredProblem fp = filter_problem(ds, cfg.add_intercept);
  RawPath rp = cd_path(fp.xs, fp.col_sq, fp.yt, cfg.n_lambda, cfg.lambda_min_ratio);
  const std::size_t l = pick_bic(rp, fp.xs, fp.yt);
  return finish_selection(ds, active_set_at(rp, l), cfg, rp.lambdas[l]);
}

std::vector<double> lasso_cv_curve(const Dataset& ds, const LassoConfig& cfg,
                                   std::vector<double>* lambdas_out) {
  if (cfg.folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  FilteredProblem fp = filter_problem(ds, cfg.add_intercept);
  const std::size_t t = fp.yt.size(), n = fp.xs.cols();
  if (cfg.folds > t) throw InvalidArgument("more folds than rows");

  // Grid comes from the full sample so every fold scores the same path points.
  RawPath full = cd_path(fp.xs, fp.col_sq, fp.yt, cfg.n_lambda, cfg.lambda_min_ratio);
  const std::size_t len = full.lambdas.size();
  if (lambdas_out) *lambdas_out = full.lambdas;

  const std::vector<std::size_t> id = fold_ids(t, cfg.folds, cfg.shuffle_folds, cfg.cv_seed);
  std::vector<double> mse_sum(len, 0.0);
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < t; ++i) (id[i] == f ? test : train).push_back(i);

    Matrix xtr(train.size(), n);
    std::vector<double> ytr(train.size());
    std::vector<double> csq(n, 0.0);
    for (std::size_t r = 0; r < train.size(); ++r) ytr[r] = fp.yt[train[r]];
    for (std::size_t j = 0; j < n; ++j) {
      const double* src = fp.xs.col(j);
      double* dst = xtr.col(j);
      double s = 0.0;
      for (std::size_t r = 0; r < train.size(); ++r) {
        dst[r] = src[train[r]];
        s += dst[r] * dst[r];
      }
      csq[j] = s;
    }

    RawPath fold_path = cd_path(xtr, csq, ytr, len, cfg.lambda_min_ratio, &full.lambdas);
    for (std::size_t l = 0; l < len; ++l) {
      double sse = 0.0;
      for (std::size_t r : test) {
        double pred = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (fold_path.coef(j, l) != 0.0) pred += fold_path.coef(j, l) * fp.xs(r, j);
        const double e = fp.yt[r] - pred;
        sse += e * e;
      }
      mse_sum[l] += sse / static_cast<double>(test.size());
    }
  }
  for (double& v : mse_sum) v /= static_cast<double>(cfg.folds);
  return mse_sum;
}

SelectionResult lasso_select_cv(const Dataset& ds, const LassoConfig& cfg) {
  std::vector<double> lambdas;
  const std::vector<double> curve = lasso_cv_curve(ds, cfg, &lambdas);
  std::size_t best = 0;
  for (std::size_t l = 1; l < curve.size(); ++l)
    if (curve[l] < curve[best]) best = l;  // strict: ties keep the larger lambda

  FilteredProblem fp = filter_problem(ds, cfg.add_intercept);
  RawPath rp = cd_path(fp.xs, fp.col_sq, fp.yt, cfg.n_lambda, cfg.lambda_min_ratio, &lambdas);
  return finish_selection(ds, active_set_at(rp, best), cfg, lambdas[best]);
}

SelectionResult adaptive_lasso_select(const Dataset& ds, const LassoConfig& cfg) {
  FilteredProblem fp = filter_problem(ds, cfg.add_intercept);
  const std::size_t t = fp.yt.size(), n = fp.xs.cols();
  const double td = static_cast<double>(t);

  double lmax = 0.0;
  std::vector<double> xty(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    if (fp.col_sq[j] > 0.0) {
      xty[j] = kernels::dot(fp.xs.col(j), fp.yt.data(), t) / td;
      lmax = std::max(lmax, std::abs(xty[j]));
    }
  const double kappa = lmax > 0.0 ? 1e-3 * lmax : 1e-3;

  // Ridge initial fit: (X'X/T + kappa I) b = X'y/T on the rescaled columns.
  Matrix s(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const double v = kernels::dot(fp.xs.col(a), fp.xs.col(b), t) / td;
      s(a, b) = v;
      s(b, a) = v;
    }
    s(a, a) += kappa;
  }
  const std::vector<double> binit = cholesky_solve(s, xty);

  double wmax = 0.0;
  for (double v : binit) wmax = std::max(wmax, std::abs(v));
  Matrix xw(t, n);
  std::vector<double> csq(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::abs(binit[j]);
    if (fp.col_sq[j] > 0.0 && w > 1e-10 * wmax) {
      const double* src = fp.xs.col(j);
      double* dst = xw.col(j);
      for (std::size_t i = 0; i < t; ++i) dst[i] = src[i] * w;
      csq[j] = w * w * fp.col_sq[j];
    } else {
      std::fill(xw.col(j), xw.col(j) + t, 0.0);  // infinite weight: excluded
    }
  }

  RawPath rp = cd_path(xw, csq, fp.yt, cfg.n_lambda, cfg.lambda_min_ratio);
  const std::size_t l = pick_bic(rp, xw, fp.yt);
  return finish_selection(ds, active_set_at(rp, l), cfg, rp.lambdas[l]);
}

}  // namespace bmt
