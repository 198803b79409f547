#include "bmt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bmt/errors.hpp"

namespace bmt {

namespace {

std::vector<std::size_t> checked_unique(const std::vector<std::size_t>& idx, std::size_t n,
                                        const char* what) {
  std::vector<std::size_t> s(idx);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && s.back() >= n)
    throw IndexOutOfRange(std::string(what) + " index " + std::to_string(s.back() + 1) +
                          " exceeds candidate count " + std::to_string(n));
  return s;
}

}  // namespace

ConfusionCounts confusion(const std::vector<std::size_t>& selected,
                          const std::vector<std::size_t>& true_set, std::size_t n_candidates) {
  const auto sel = checked_unique(selected, n_candidates, "selected");
  const auto tru = checked_unique(true_set, n_candidates, "true-set");
  ConfusionCounts c;
  std::size_t inter = 0;
  std::size_t a = 0, b = 0;
  while (a < sel.size() && b < tru.size()) {
    if (sel[a] < tru[b]) ++a;
    else if (tru[b] < sel[a]) ++b;
    else { ++inter; ++a; ++b; }
  }
  c.tp = inter;
  c.fp = sel.size() - inter;
  c.fn = tru.size() - inter;
  c.tn = n_candidates - c.tp - c.fp - c.fn;
  return c;
}

double mcc(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double d1 = tp + fp, d2 = tp + fn, d3 = tn + fp, d4 = tn + fn;
  if (d1 == 0.0 || d2 == 0.0 || d3 == 0.0 || d4 == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(d1 * d2 * d3 * d4);
}

double tdr(const ConfusionCounts& c) {
  const double d = static_cast<double>(c.tp + c.fp);
  return d == 0.0 ? 0.0 : static_cast<double>(c.tp) / d;
}

double fdr(const ConfusionCounts& c) {
  const double d = static_cast<double>(c.tp + c.fp);
  return d == 0.0 ? 0.0 : static_cast<double>(c.fp) / d;
}

double tpr(const ConfusionCounts& c, bool* empty_true_set) {
  if (empty_true_set) *empty_true_set = false;
  const double d = static_cast<double>(c.tp + c.fn);
  if (d == 0.0) {
    if (empty_true_set) *empty_true_set = true;
    return 1.0;
  }
  return static_cast<double>(c.tp) / d;
}

double fpr(const ConfusionCounts& c) {
  const double d = static_cast<double>(c.fp + c.tn);
  return d == 0.0 ? 0.0 : static_cast<double>(c.fp) / d;
}

double f1(const ConfusionCounts& c) {
  const double precision = tdr(c);
  const double recall = tpr(c);
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

double coef_rmse(const std::vector<std::vector<double>>& beta_per_rep,
                 const std::vector<double>& beta_true) {
  if (beta_per_rep.empty()) throw DimensionMismatch("coef_rmse: no replications");
  double acc = 0.0;
  for (const auto& b : beta_per_rep) {
    if (b.size() != beta_true.size())
      throw DimensionMismatch("coef_rmse: coefficient vector length mismatch");
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = b[j] - beta_true[j];
      acc += d * d;
    }
  }
  return std::sqrt(acc / static_cast<double>(beta_per_rep.size()));
}

double rmsfe(const std::vector<double>& actuals, const std::vector<double>& predictions) {
  if (actuals.size() != predictions.size())
    throw DimensionMismatch("rmsfe: length mismatch");
  if (actuals.empty()) throw DimensionMismatch("rmsfe: empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double d = actuals[i] - predictions[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(actuals.size()));
}

double r2_oos(const std::vector<double>& actuals, const std::vector<double>& predictions,
              double benchmark_mean) {
  if (actuals.size() != predictions.size())
    throw DimensionMismatch("r2_oos: length mismatch");
  if (actuals.empty()) throw DimensionMismatch("r2_oos: empty inputs");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double e = actuals[i] - predictions[i];
    const double b = actuals[i] - benchmark_mean;
    num += e * e;
    den += b * b;
  }
  if (den == 0.0) return num == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - num / den;
}

MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw DimensionMismatch("aggregate_reports: no reports");
  MetricsReport out;
  const auto mean_field = [&](double MetricsReport::* f) {
    double s = 0.0;
    std::size_t cnt = 0;
    for (const auto& r : reports)
      if (std::isfinite(r.*f)) {
        s += r.*f;
        ++cnt;
      }
    return cnt == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : s / static_cast<double>(cnt);
  };
  const auto rms_field = [&](double MetricsReport::* f) {
    double s = 0.0;
    std::size_t cnt = 0;
    for (const auto& r : reports)
      if (std::isfinite(r.*f)) {
        s += (r.*f) * (r.*f);
        ++cnt;
      }
    return cnt == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : std::sqrt(s / static_cast<double>(cnt));
  };
  out.mcc = mean_field(&MetricsReport::mcc);
  out.f1 = mean_field(&MetricsReport::f1);
  out.tdr = mean_field(&MetricsReport::tdr);
  out.fdr = mean_field(&MetricsReport::fdr);
  out.tpr = mean_field(&MetricsReport::tpr);
  out.fpr = mean_field(&MetricsReport::fpr);
  out.model_size = mean_field(&MetricsReport::model_size);
  out.rmse = rms_field(&MetricsReport::rmse);
  out.rmsfe = rms_field(&MetricsReport::rmsfe);
  out.r2_oos = mean_field(&MetricsReport::r2_oos);
  return out;
}

}  // namespace bmt
