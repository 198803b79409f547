#pragma once

#include <cstddef>
#include <vector>

namespace bmt {

// Dense column-major matrix. Columns are contiguous so the vector kernels
// run directly on them.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  void set_col(std::size_t j, const double* v);
  void set_col(std::size_t j, const std::vector<double>& v) { set_col(j, v.data()); }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Householder QR with column pivoting, A*P = Q*R. Numerical rank is the
// number of diagonal entries of R above rel_tol * |R(0,0)|. Columns beyond
// the rank are never factored; least-squares solves give them zero
// coefficients (a "basic" solution).
struct PivotedQr {
  Matrix a;                       // reflectors below the diagonal, R on/above
  std::vector<double> tau;
  std::vector<std::size_t> piv;   // factor column j came from original piv[j]
  std::size_t rank = 0;
  std::size_t rows() const { return a.rows(); }
  std::size_t cols() const { return a.cols(); }

  void apply_qt(double* v) const;  // v <- Q'v, v has length rows()
  void apply_q(double* v) const;   // v <- Qv

  // Least-squares coefficients in original column order (zeros on dropped
  // columns). If rss is non-null, receives the minimal residual sum of
  // squares implied by the factorization.
  std::vector<double> solve_ls(const std::vector<double>& y, double* rss = nullptr) const;
};

PivotedQr qr_pivoted(const Matrix& A, double rel_tol = 1e-10);

// (A'A)^{-1} from a full-rank pivoted factorization. Throws RankDeficient
// when rank < cols.
Matrix xtx_inverse(const PivotedQr& f);

// Solve S x = b for symmetric positive definite S via Cholesky (S is
// overwritten). Throws RankDeficient if a pivot is not positive.
std::vector<double> cholesky_solve(Matrix S, std::vector<double> b);

// Solve A x = b by LU with partial pivoting (A is overwritten). Throws
// RankDeficient on a zero pivot.
std::vector<double> lu_solve(Matrix A, std::vector<double> b);

// r = y - A * coef
std::vector<double> residual_vector(const std::vector<double>& y, const Matrix& A,
                                    const std::vector<double>& coef);

double mean_of(const double* v, std::size_t n);
// Centered sample variance with denominator n.
double variance_of(const double* v, std::size_t n);

}  // namespace bmt
