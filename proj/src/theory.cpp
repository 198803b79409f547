#include "bmt/theory.hpp"

#include <cmath>

#include "bmt/errors.hpp"

namespace bmt {

void CovarianceSpec::validate() const {
  if (!(sigma11 > 0.0)) throw InvalidArgument("covariance spec: sigma11 must be positive");
  const std::size_t m = sigma_12.size();
  if (beta2.size() != m) throw DimensionMismatch("covariance spec: beta2 length mismatch");
  if (!sigma22.empty() && (sigma22.rows() != m || sigma22.cols() != m))
    throw DimensionMismatch("covariance spec: sigma22 shape mismatch");
  for (const auto& p : proxies) {
    if (!(p.sigma_ii > 0.0))
      throw InvalidArgument("covariance spec: proxy variance must be positive");
    if (p.sigma_i2.size() != m)
      throw DimensionMismatch("covariance spec: proxy cross-covariance length mismatch");
  }
}

DominanceReport dominance_condition(const CovarianceSpec& spec, std::size_t proxy_index) {
  spec.validate();
  if (proxy_index >= spec.proxies.size())
    throw IndexOutOfRange("dominance_condition: proxy index out of range");
  const ProxyRow& p = spec.proxies[proxy_index];

  double b2_si2 = 0.0, b2_s12 = 0.0;
  for (std::size_t j = 0; j < spec.beta2.size(); ++j) {
    b2_si2 += spec.beta2[j] * p.sigma_i2[j];
    b2_s12 += spec.beta2[j] * spec.sigma_12[j];
  }

  const double sii_inv = 1.0 / p.sigma_ii;
  const double one_minus = 1.0 - sii_inv * p.sigma_i1;
  const double ratio = spec.sigma11 * sii_inv;

  DominanceReport rep;
  rep.lhs = spec.sigma11 * spec.beta1 * spec.beta1 * one_minus * one_minus +
            sii_inv * b2_si2 * spec.beta1 * one_minus +
            b2_si2 * b2_si2 * ratio * (ratio - 1.0);
  rep.rhs = 3.0 / spec.sigma11 * b2_s12 * b2_s12;
  rep.holds = rep.lhs > rep.rhs;
  return rep;
}

NoncentralityReport stage1_noncentrality(double beta, double sigma11, double sigma_u2,
                                         double rho_i1, std::size_t t) {
  if (!(sigma11 > 0.0)) throw InvalidArgument("noncentrality: sigma11 must be positive");
  if (!(sigma_u2 > 0.0)) throw InvalidArgument("noncentrality: sigma_u2 must be positive");
  if (!(std::abs(rho_i1) < 1.0)) throw InvalidArgument("noncentrality: |rho| must be < 1");
  if (t == 0) throw InvalidArgument("noncentrality: t must be positive");

  const double td = static_cast<double>(t);
  const double b2s = beta * beta * sigma11;
  NoncentralityReport rep;
  rep.lambda_signal = std::sqrt(td) * beta * std::sqrt(sigma11) / std::sqrt(sigma_u2);
  const double denom = sigma_u2 + b2s * (1.0 - rho_i1 * rho_i1);
  rep.lambda_proxy = std::sqrt(td) * beta * rho_i1 * std::sqrt(sigma11) / std::sqrt(denom);
  rep.gap_direct =
      rep.lambda_signal * rep.lambda_signal - rep.lambda_proxy * rep.lambda_proxy;
  rep.gap_closed_form =
      td * b2s * (1.0 - rho_i1 * rho_i1) * (sigma_u2 + b2s) / (sigma_u2 * denom);
  return rep;
}

IrrepresentableReport irrepresentable_check(const Matrix& sigma,
                                            const std::vector<std::size_t>& support,
                                            const std::vector<double>& signs) {
  const std::size_t n = sigma.rows();
  if (sigma.cols() != n) throw DimensionMismatch("irrepresentable: sigma must be square");
  if (support.empty()) throw InvalidArgument("irrepresentable: empty support");
  if (signs.size() != support.size())
    throw DimensionMismatch("irrepresentable: signs length must match support");
  std::vector<unsigned char> in_support(n, 0);
  for (std::size_t idx : support) {
    if (idx >= n) throw IndexOutOfRange("irrepresentable: support index out of range");
    if (in_support[idx]) throw InvalidArgument("irrepresentable: duplicate support index");
    in_support[idx] = 1;
  }

  const std::size_t s = support.size();
  Matrix s11(s, s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) s11(a, b) = sigma(support[a], support[b]);
  const std::vector<double> v = lu_solve(s11, signs);

  IrrepresentableReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_support[i]) continue;
    double row = 0.0;
    for (std::size_t a = 0; a < s; ++a) row += sigma(i, support[a]) * v[a];
    rep.value = std::max(rep.value, std::abs(row));
  }
  rep.holds = rep.value < 1.0;
  return rep;
}

WedgeInterval wedge_interval(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidArgument("wedge_interval: alpha must lie in (0,1]");
  WedgeInterval w;
  w.lower = 0.5;
  w.upper = 1.0 / (1.0 + alpha);
  w.nonempty = w.upper > w.lower;
  return w;
}

std::vector<double> theorem7_thresholds(const std::vector<double>& betas) {
  if (betas.empty()) throw InvalidArgument("thresholds: empty coefficient vector");
  for (std::size_t j = 0; j < betas.size(); ++j) {
    if (!(std::abs(betas[j]) > 0.0))
      throw InvalidArgument("thresholds: coefficients must be nonzero");
    if (j > 0 && std::abs(betas[j]) > std::abs(betas[j - 1]))
      throw InvalidArgument("thresholds: coefficients must be sorted by descending magnitude");
  }
  const std::size_t k = betas.size();
  std::vector<double> suffix(k);
  double acc = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    acc += std::abs(betas[j]);
    suffix[j] = acc;
  }
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = std::abs(betas[j]) / suffix[j];
  return out;
}

}  // namespace bmt
