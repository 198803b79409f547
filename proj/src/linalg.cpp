#include "bmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"

namespace bmt {

void Matrix::set_col(std::size_t j, const double* v) {
  std::memcpy(col(j), v, rows_ * sizeof(double));
}

PivotedQr qr_pivoted(const Matrix& A, double rel_tol) {
  const std::size_t m = A.rows(), n = A.cols();
  PivotedQr f;
  f.a = A;
  f.tau.assign(n, 0.0);
  f.piv.resize(n);
  for (std::size_t j = 0; j < n; ++j) f.piv[j] = j;

  std::vector<double> norms(n), norms0(n);
  for (std::size_t j = 0; j < n; ++j) {
    norms[j] = kernels::sumsq(f.a.col(j), m);
    norms0[j] = norms[j];
  }

  const std::size_t kmax = std::min(m, n);
  double r00 = 0.0;
  std::size_t k = 0;
  for (; k < kmax; ++k) {
    // Pivot: remaining column with the largest residual norm.
    std::size_t best = k;
    for (std::size_t j = k + 1; j < n; ++j)
      if (norms[j] > norms[best]) best = j;
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(f.a(i, k), f.a(i, best));
      std::swap(norms[k], norms[best]);
      std::swap(norms0[k], norms0[best]);
      std::swap(f.piv[k], f.piv[best]);
    }

    double* x = f.a.col(k) + k;
    const std::size_t len = m - k;
    double normx = std::sqrt(std::max(0.0, kernels::sumsq(x, len)));
    if (k == 0) r00 = normx;
    if (normx <= rel_tol * r00 || normx == 0.0) break;

    const double alpha = x[0];
    const double beta = alpha >= 0.0 ? -normx : normx;
    f.tau[k] = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < len; ++i) x[i] *= scale;
    x[0] = beta;

    // Apply the reflector to the trailing columns and downdate their norms.
    for (std::size_t j = k + 1; j < n; ++j) {
      double* cj = f.a.col(j) + k;
      double w = cj[0] + kernels::dot(x + 1, cj + 1, len - 1);
      w *= f.tau[k];
      cj[0] -= w;
      kernels::axpy(-w, x + 1, cj + 1, len - 1);
      double nj = norms[j] - cj[0] * cj[0];
      // Recompute when cancellation has eaten the running norm.
      if (nj < 1e-8 * norms0[j]) {
        nj = kernels::sumsq(f.a.col(j) + k + 1, m - k - 1);
        norms0[j] = nj;
      }
      norms[j] = std::max(0.0, nj);
    }
  }
  f.rank = k;
  return f;
}

void PivotedQr::apply_qt(double* v) const {
  const std::size_t m = rows();
  for (std::size_t k = 0; k < rank; ++k) {
    const double* u = a.col(k) + k;
    const std::size_t len = m - k;
    double w = v[k] + kernels::dot(u + 1, v + k + 1, len - 1);
    w *= tau[k];
    v[k] -= w;
    kernels::axpy(-w, u + 1, v + k + 1, len - 1);
  }
}

void PivotedQr::apply_q(double* v) const {
  const std::size_t m = rows();
  for (std::size_t kk = rank; kk-- > 0;) {
    const double* u = a.col(kk) + kk;
    const std::size_t len = m - kk;
    double w = v[kk] + kernels::dot(u + 1, v + kk + 1, len - 1);
    w *= tau[kk];
    v[kk] -= w;
    kernels::axpy(-w, u + 1, v + kk + 1, len - 1);
  }
}

std::vector<double> PivotedQr::solve_ls(const std::vector<double>& y, double* rss) const {
  if (y.size() != rows()) throw DimensionMismatch("solve_ls: length of y");
  std::vector<double> qty = y;
  apply_qt(qty.data());
  if (rss) *rss = kernels::sumsq(qty.data() + rank, rows() - rank);
  // Back substitution on the leading rank x rank block of R.
  std::vector<double> b(rank, 0.0);
  for (std::size_t i = rank; i-- > 0;) {
    double s = qty[i];
    for (std::size_t j = i + 1; j < rank; ++j) s -= a(i, j) * b[j];
    b[i] = s / a(i, i);
  }
  std::vector<double> coef(cols(), 0.0);
  for (std::size_t j = 0; j < rank; ++j) coef[piv[j]] = b[j];
  return coef;
}

Matrix xtx_inverse(const PivotedQr& f) {
  const std::size_t n = f.cols();
  if (f.rank < n) throw RankDeficient("xtx_inverse: factorization is rank deficient");
  // Rinv: inverse of the upper-triangular R.
  Matrix rinv(n, n, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    rinv(j, j) = 1.0 / f.a(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += f.a(i, k) * rinv(k, j);
      rinv(i, j) = -s / f.a(i, i);
    }
  }
  // (A'A)^{-1} = P Rinv Rinv' P'
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = std::max(i, j); k < n; ++k) s += rinv(i, k) * rinv(j, k);
      out(f.piv[i], f.piv[j]) = s;
      out(f.piv[j], f.piv[i]) = s;
    }
  }
  return out;
}

std::vector<double> cholesky_solve(Matrix S, std::vector<double> b) {
  const std::size_t n = S.rows();
  if (S.cols() != n || b.size() != n) throw DimensionMismatch("cholesky_solve");
  for (std::size_t j = 0; j < n; ++j) {
    double d = S(j, j) - kernels::sumsq(S.col(j), j);
    if (d <= 0.0) throw RankDeficient("cholesky_solve: matrix not positive definite");
    d = std::sqrt(d);
    S(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double s = S(j, i) - kernels::dot(S.col(i), S.col(j), j);
      S(j, i) = s / d;  // L(i,j) stored transposed, at (j,i), so rows stay contiguous
    }
  }
  // Forward solve L z = b with L(i,j) at S(j,i).
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= S(j, i) * b[j];
    b[i] = s / S(i, i);
  }
  // Back solve L' x = z.
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= S(i, j) * b[j];
    b[i] = s / S(i, i);
  }
  return b;
}

std::vector<double> lu_solve(Matrix A, std::vector<double> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw DimensionMismatch("lu_solve");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
    if (A(p, k) == 0.0) throw RankDeficient("lu_solve: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = A(i, k) / A(k, k);
      A(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
      b[i] -= l * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  return b;
}

std::vector<double> residual_vector(const std::vector<double>& y, const Matrix& A,
                                    const std::vector<double>& coef) {
  if (A.rows() != y.size() || A.cols() != coef.size())
    throw DimensionMismatch("residual_vector");
  std::vector<double> r = y;
  for (std::size_t j = 0; j < A.cols(); ++j)
    if (coef[j] != 0.0) kernels::axpy(-coef[j], A.col(j), r.data(), r.size());
  return r;
}

double mean_of(const double* v, std::size_t n) {
  return n == 0 ? 0.0 : kernels::sum(v, n) / static_cast<double>(n);
}

double variance_of(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  const double m = mean_of(v, n);
  const double ss = kernels::sumsq(v, n);
  return std::max(0.0, ss / static_cast<double>(n) - m * m);
}

}  // namespace bmt
