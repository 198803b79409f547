#pragma once

#include <cstddef>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/linalg.hpp"

namespace bmt {

struct RegressionFit {
  std::vector<double> coefficients;
  std::vector<double> residuals;
  std::vector<double> se;
  std::vector<double> t_stats;
  double sigma2_hat = 0.0;
  double rss = 0.0;
  std::size_t df = 0;
  std::size_t rank = 0;
  bool rank_deficient = false;
};

// OLS of y on the columns of w. With allow_rank_deficient the pivoted-QR basic
// solution is returned (dropped columns get zero coefficients) and all standard
// errors are zeroed; otherwise a deficient design throws RankDeficient.
RegressionFit ols_fit(const std::vector<double>& y, const Matrix& w,
                      bool allow_rank_deficient = false);

// Replaces v with its residual against the column span of the factored matrix.
void partial_out(std::vector<double>& v, const PivotedQr& qr);

// t-stat of one candidate after both it and the target were residualized
// against the same q controls. df must equal rows - q - 1.
struct CandidateStat {
  std::size_t index = 0;
  double t = 0.0;
  double theta = 0.0;
  double se = 0.0;
  bool degenerate = false;  // candidate absorbed by the controls, t forced to 0
  bool capped = false;      // perfect fit, |t| pinned at the cap
};

inline constexpr double kTStatCap = 1e12;

CandidateStat fwl_candidate_stat(const double* x_til, const double* y_til,
                                 std::size_t rows, std::size_t df,
                                 double var_x_orig, bool robust_se);

// Incrementally maintained orthonormal basis for stagewise conditioning.
class StagewiseProjector {
 public:
  explicit StagewiseProjector(std::size_t rows) : t_(rows) {}

  std::size_t rows() const { return t_; }
  std::size_t size() const { return basis_.size(); }

  // Residualizes col against the current basis and appends the normalized
  // remainder. Returns false (and appends nothing) when the remainder is
  // numerically null, i.e. col already lies in the span.
  bool absorb(const double* col);

  void residualize(double* v) const;               // against the whole basis
  void residualize_against_last(double* v) const;  // against the newest direction only

 private:
  std::size_t t_;
  std::vector<std::vector<double>> basis_;
};

// Conditional t-stats for every candidate in `active`, controlling for an
// optional intercept, the dataset controls, and the candidate columns listed
// in `conditioning`. Throws RankDeficient if any control fails to absorb.
std::vector<CandidateStat> conditional_t_stats(const Dataset& ds,
                                               const std::vector<std::size_t>& conditioning,
                                               const std::vector<std::size_t>& active,
                                               bool robust_se = false,
                                               bool add_intercept = true);

// First principal component of the standardized columns of x, returned as a
// score series scaled to unit sample variance. Power iteration; the loading
// with the largest magnitude is made positive so the sign is reproducible.
std::vector<double> first_principal_component(const Matrix& x);

}  // namespace bmt
