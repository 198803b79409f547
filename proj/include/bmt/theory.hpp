#pragma once

#include <cstddef>
#include <vector>

#include "bmt/linalg.hpp"

namespace bmt {

// Population covariance description of one signal of interest (x1), the other
// signals (block 2), and a list of proxy rows (block 3), plus the true
// coefficients. All quantities are population-level.
struct ProxyRow {
  double sigma_i1 = 0.0;            // cov(x_i, x1)
  double sigma_ii = 1.0;            // var(x_i)
  std::vector<double> sigma_i2;     // cov(x_i, other signals)
};

struct CovarianceSpec {
  double sigma11 = 1.0;
  std::vector<double> sigma_12;     // cov(x1, other signals)
  Matrix sigma22;                   // covariance of the other signals
  double beta1 = 0.0;
  std::vector<double> beta2;
  std::vector<ProxyRow> proxies;

  void validate() const;
};

struct DominanceReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Signal-to-proxy dominance inequality, transcribed term by term:
//   s11 b1^2 (1 - sii^-1 si1)^2
//   + sii^-1 (b2'si2) b1 (1 - sii^-1 si1)
//   + (b2'si2)^2 s11 sii^-1 (s11 sii^-1 - 1)
//   > 3 s11^-1 (b2's12)^2
DominanceReport dominance_condition(const CovarianceSpec& spec, std::size_t proxy_index);

struct NoncentralityReport {
  double lambda_signal = 0.0;
  double lambda_proxy = 0.0;
  double gap_direct = 0.0;       // lambda_signal^2 - lambda_proxy^2
  double gap_closed_form = 0.0;  // the displayed closed form, for cross-checking
};

// Stage-1 noncentralities of the signal and of a proxy with correlation
// rho_i1 to it: lambda_1 = sqrt(T) b sqrt(s11) / s_u and
// lambda_i = sqrt(T) b rho sqrt(s11) / sqrt(s_u^2 + b^2 s11 (1 - rho^2)).
NoncentralityReport stage1_noncentrality(double beta, double sigma11, double sigma_u2,
                                         double rho_i1, std::size_t t);

struct IrrepresentableReport {
  double value = 0.0;  // || Sigma_21 Sigma_11^-1 sign(beta_1) ||_inf
  bool holds = false;  // value < 1
};

IrrepresentableReport irrepresentable_check(const Matrix& sigma,
                                            const std::vector<std::size_t>& support,
                                            const std::vector<double>& signs);

struct WedgeInterval {
  double lower = 0.5;
  double upper = 0.0;  // 1 / (1 + alpha)
  bool nonempty = false;
};

WedgeInterval wedge_interval(double alpha);

// threshold[j] = |beta_j| / sum_{i >= j} |beta_i| for betas sorted by
// descending magnitude; the last entry is exactly 1.
std::vector<double> theorem7_thresholds(const std::vector<double>& betas);

}  // namespace bmt
