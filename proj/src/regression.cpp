#include "bmt/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"

namespace bmt {

RegressionFit ols_fit(const std::vector<double>& y, const Matrix& w,
                      bool allow_rank_deficient) {
  const std::size_t t = y.size();
  if (!w.empty() && w.rows() != t)
    throw DimensionMismatch("ols_fit: design rows != target length");

  RegressionFit fit;
  if (w.cols() == 0) {
    fit.residuals = y;
    fit.rss = kernels::sumsq(y.data(), t);
    fit.df = t;
    fit.sigma2_hat = t > 0 ? fit.rss / static_cast<double>(t) : 0.0;
    return fit;
  }
  // A wide design (more regressors than rows) is necessarily rank deficient; the
  // pivoted QR still produces a basic least-squares solution, so the same opt-in
  // flag covers it.
  if (t < w.cols() && !allow_rank_deficient)
    throw InsufficientRows("ols_fit: fewer rows than regressors");

  PivotedQr qr = qr_pivoted(w);
  fit.rank = qr.rank;
  fit.rank_deficient = qr.rank < w.cols();
  if (fit.rank_deficient && !allow_rank_deficient)
    throw RankDeficient("ols_fit: design matrix is rank deficient (rank " +
                        std::to_string(qr.rank) + " of " + std::to_string(w.cols()) + ")");

  fit.coefficients = qr.solve_ls(y, &fit.rss);
  fit.residuals = residual_vector(y, w, fit.coefficients);
  fit.df = t - qr.rank;
  fit.sigma2_hat = fit.df > 0 ? fit.rss / static_cast<double>(fit.df) : 0.0;

  fit.se.assign(w.cols(), 0.0);
  fit.t_stats.assign(w.cols(), 0.0);
  if (!fit.rank_deficient) {
    Matrix g = xtx_inverse(qr);
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double v = fit.sigma2_hat * g(j, j);
      fit.se[j] = v > 0.0 ? std::sqrt(v) : 0.0;
      if (fit.se[j] > 0.0) {
        fit.t_stats[j] = fit.coefficients[j] / fit.se[j];
      } else if (fit.coefficients[j] != 0.0) {
        fit.t_stats[j] = fit.coefficients[j] > 0.0 ? kTStatCap : -kTStatCap;
      }
    }
  }
  return fit;
}

void partial_out(std::vector<double>& v, const PivotedQr& qr) {
  if (v.size() != qr.a.rows()) throw DimensionMismatch("partial_out: length mismatch");
  qr.apply_qt(v.data());
  std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(qr.rank), 0.0);
  qr.apply_q(v.data());
}

CandidateStat fwl_candidate_stat(const double* x_til, const double* y_til,
                                 std::size_t rows, std::size_t df,
                                 double var_x_orig, bool robust_se) {
  CandidateStat s;
  const double var_til = variance_of(x_til, rows);
  if (var_til < 1e-12 * var_x_orig || var_til == 0.0) {
    s.degenerate = true;
    return s;
  }

  double xy = 0.0, xx = 0.0;
  kernels::dot_sumsq(x_til, y_til, rows, &xy, &xx);
  const double yy = kernels::sumsq(y_til, rows);
  s.theta = xy / xx;
  const double rss = std::max(0.0, yy - xy * xy / xx);

  if (yy == 0.0 || rss <= 1e-12 * yy) {
    s.capped = true;
    s.t = s.theta > 0.0 ? kTStatCap : (s.theta < 0.0 ? -kTStatCap : 0.0);
    return s;
  }

  double se2;
  if (robust_se) {
    double meat = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double u = y_til[i] - s.theta * x_til[i];
      meat += x_til[i] * x_til[i] * u * u;
    }
    se2 = (static_cast<double>(rows) / static_cast<double>(df)) * meat / (xx * xx);
  } else {
    se2 = rss / static_cast<double>(df) / xx;
  }
  s.se = std::sqrt(se2);
  if (s.se > 0.0) {
    s.t = s.theta / s.se;
  } else {
    s.capped = true;
    s.t = s.theta > 0.0 ? kTStatCap : (s.theta < 0.0 ? -kTStatCap : 0.0);
  }
  return s;
}

bool StagewiseProjector::absorb(const double* col) {
  const double nrm0 = kernels::sumsq(col, t_);
  std::vector<double> r(col, col + t_);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) {
      const double c = kernels::dot(b.data(), r.data(), t_);
      kernels::axpy(-c, b.data(), r.data(), t_);
    }
  const double nrm = kernels::sumsq(r.data(), t_);
  if (nrm <= 1e-20 * nrm0 || nrm == 0.0) return false;
  const double inv = 1.0 / std::sqrt(nrm);
  for (double& v : r) v *= inv;
  basis_.push_back(std::move(r));
  return true;
}

void StagewiseProjector::residualize(double* v) const {
  for (const auto& b : basis_) {
    const double c = kernels::dot(b.data(), v, t_);
    kernels::axpy(-c, b.data(), v, t_);
  }
}

void StagewiseProjector::residualize_against_last(double* v) const {
  if (basis_.empty()) return;
  const auto& b = basis_.back();
  const double c = kernels::dot(b.data(), v, t_);
  kernels::axpy(-c, b.data(), v, t_);
}

std::vector<CandidateStat> conditional_t_stats(const Dataset& ds,
                                               const std::vector<std::size_t>& conditioning,
                                               const std::vector<std::size_t>& active,
                                               bool robust_se, bool add_intercept) {
  ds.validate();
  const std::size_t t = ds.rows();
  StagewiseProjector proj(t);
  if (add_intercept) {
    const std::vector<double> ones(t, 1.0);
    proj.absorb(ones.data());
  }
  for (std::size_t j = 0; j < ds.z.cols(); ++j)
    if (!proj.absorb(ds.z.col(j)))
      throw RankDeficient("control column " + std::to_string(j + 1) + " is collinear");
  for (std::size_t idx : conditioning) {
    if (idx >= ds.x.cols()) throw IndexOutOfRange("conditioning index out of range");
    if (!proj.absorb(ds.x.col(idx)))
      throw RankDeficient("conditioning candidate " + std::to_string(idx + 1) +
                          " is collinear with the controls");
  }

  const std::size_t q = proj.size();
  if (t < q + 2) throw InsufficientRows("conditional_t_stats: no residual degrees of freedom");
  const std::size_t df = t - q - 1;

  std::vector<double> ytil = ds.y;
  proj.residualize(ytil.data());

  std::vector<CandidateStat> out;
  out.reserve(active.size());
  std::vector<double> xtil(t);
  for (std::size_t idx : active) {
    if (idx >= ds.x.cols()) throw IndexOutOfRange("active index out of range");
    std::memcpy(xtil.data(), ds.x.col(idx), t * sizeof(double));
    const double var_orig = variance_of(xtil.data(), t);
    proj.residualize(xtil.data());
    CandidateStat s = fwl_candidate_stat(xtil.data(), ytil.data(), t, df, var_orig, robust_se);
    s.index = idx;
    out.push_back(s);
  }
  return out;
}

std::vector<double> first_principal_component(const Matrix& x) {
  const std::size_t t = x.rows(), n = x.cols();
  if (t < 2 || n == 0) throw InsufficientRows("principal component needs >= 2 rows and a column");

  // Standardized copy; constant columns contribute nothing.
  Matrix xs(t, n);
  bool any_live = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double* c = x.col(j);
    const double m = mean_of(c, t);
    double ss = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      const double d = c[i] - m;
      xs(i, j) = d;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(t - 1));
    if (sd > 0.0) {
      any_live = true;
      const double inv = 1.0 / sd;
      for (std::size_t i = 0; i < t; ++i) xs(i, j) *= inv;
    } else {
      for (std::size_t i = 0; i < t; ++i) xs(i, j) = 0.0;
    }
  }
  if (!any_live) throw DegenerateRegressor("principal component of constant columns");

  const double denom = static_cast<double>(t - 1);
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(t), u(n);
  bool restarted = false;
  for (int iter = 0; iter < 10000; ++iter) {
    // u = Xs' (Xs v) / (t - 1), one matvec each way
    for (std::size_t i = 0; i < t; ++i) w[i] = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (v[j] != 0.0) kernels::axpy(v[j], xs.col(j), w.data(), t);
    double unorm2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      u[j] = kernels::dot(xs.col(j), w.data(), t) / denom;
      unorm2 += u[j] * u[j];
    }
    if (unorm2 <= 1e-300) {
      if (restarted) throw DegenerateRegressor("principal component iteration collapsed");
      restarted = true;  // start direction was orthogonal to the range, use a ramp
      double s2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        v[j] = static_cast<double>(j + 1);
        s2 += v[j] * v[j];
      }
      for (double& e : v) e /= std::sqrt(s2);
      continue;
    }
    const double inv = 1.0 / std::sqrt(unorm2);
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double nj = u[j] * inv;
      delta = std::max(delta, std::abs(nj - v[j]));
      v[j] = nj;
    }
    if (delta <= 1e-10) break;
  }

  // Deterministic sign: the largest-magnitude loading points up.
  std::size_t arg = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
  if (v[arg] < 0.0)
    for (double& e : v) e = -e;

  std::vector<double> score(t, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    if (v[j] != 0.0) kernels::axpy(v[j], xs.col(j), score.data(), t);
  const double sv = kernels::sumsq(score.data(), t) / denom;
  if (sv <= 0.0) throw DegenerateRegressor("principal component score has zero variance");
  const double inv = 1.0 / std::sqrt(sv);
  for (double& e : score) e *= inv;
  return score;
}

}  // namespace bmt
