#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace bmt {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

// Indices are 0-based and must be < n_candidates. Duplicates are collapsed.
ConfusionCounts confusion(const std::vector<std::size_t>& selected,
                          const std::vector<std::size_t>& true_set,
                          std::size_t n_candidates);

// (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)); 0 when any factor is 0.
double mcc(const ConfusionCounts& c);
double f1(const ConfusionCounts& c);   // harmonic mean of tdr and tpr, 0/0 -> 0
double tdr(const ConfusionCounts& c);  // tp / (tp + fp), 0/0 -> 0
double fdr(const ConfusionCounts& c);  // fp / (tp + fp), 0/0 -> 0
// tp / (tp + fn); an empty true set gives 1 and raises *empty_true_set.
double tpr(const ConfusionCounts& c, bool* empty_true_set = nullptr);
double fpr(const ConfusionCounts& c);  // fp / (fp + tn), 0/0 -> 0

// sqrt((1/r) * sum_j ||beta_rep_j - beta_true||^2)
double coef_rmse(const std::vector<std::vector<double>>& beta_per_rep,
                 const std::vector<double>& beta_true);

double rmsfe(const std::vector<double>& actuals, const std::vector<double>& predictions);

// 1 - MSE(predictions) / MSE(benchmark_mean); benchmark_mean is the training mean.
double r2_oos(const std::vector<double>& actuals, const std::vector<double>& predictions,
              double benchmark_mean);

struct MetricsReport {
  double mcc = 0.0;
  double f1 = 0.0;
  double tdr = 0.0;
  double fdr = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double model_size = 0.0;
  double rmse = 0.0;
  double rmsfe = 0.0;
  double r2_oos = std::numeric_limits<double>::quiet_NaN();
};

// Rates and model size average arithmetically; rmse and rmsfe combine as the
// root of the mean of squares so the result matches pooling the raw errors.
// NaN entries are skipped per field.
MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports);

}  // namespace bmt
