#include "bmt/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"
#include "bmt/metrics.hpp"
#include "bmt/regression.hpp"

namespace bmt {

BuiltDesign build_design(const Dataset& input, const DesignOptions& opt) {
  input.validate();
  const std::size_t t0 = input.rows();
  const std::size_t drop = std::max(opt.lag_target, opt.lags_of_candidates);
  if (t0 <= drop + input.zeta() + 2)
    throw InsufficientRows("build_design: not enough rows after lagging");
  const std::size_t t = t0 - drop;
  const std::size_t n0 = input.n_candidates();

  BuiltDesign out;
  out.dataset.y.assign(input.y.begin() + static_cast<std::ptrdiff_t>(drop), input.y.end());

  const std::size_t n = n0 * (1 + opt.lags_of_candidates);
  out.dataset.x = Matrix(t, n);
  out.dataset.candidate_names.reserve(n);
  const auto base_name = [&](std::size_t j) {
    return input.candidate_names.empty() ? "x" + std::to_string(j + 1)
                                         : input.candidate_names[j];
  };
  for (std::size_t j = 0; j < n0; ++j) {
    std::memcpy(out.dataset.x.col(j), input.x.col(j) + drop, t * sizeof(double));
    out.dataset.candidate_names.push_back(base_name(j));
  }
  for (std::size_t lag = 1; lag <= opt.lags_of_candidates; ++lag)
    for (std::size_t j = 0; j < n0; ++j) {
      const std::size_t col = lag * n0 + j;
      std::memcpy(out.dataset.x.col(col), input.x.col(j) + (drop - lag), t * sizeof(double));
      out.dataset.candidate_names.push_back(base_name(j) + "_lag" + std::to_string(lag));
    }

  std::vector<std::vector<double>> z_cols;
  for (std::size_t j = 0; j < input.z.cols(); ++j) {
    z_cols.emplace_back(input.z.col(j) + drop, input.z.col(j) + t0);
    out.control_names.push_back("z" + std::to_string(j + 1));
  }
  if (opt.add_constant) {
    z_cols.emplace_back(t, 1.0);
    out.control_names.push_back("const");
  }
  if (opt.add_trend) {
    std::vector<double> trend(t);
    for (std::size_t i = 0; i < t; ++i) trend[i] = static_cast<double>(i + 1);
    const double m = mean_of(trend.data(), t);
    const double sd = std::sqrt(variance_of(trend.data(), t));
    for (double& v : trend) v = (v - m) / sd;
    z_cols.push_back(std::move(trend));
    out.control_names.push_back("trend");
  }
  for (std::size_t lag = 1; lag <= opt.lag_target; ++lag) {
    z_cols.emplace_back(input.y.begin() + static_cast<std::ptrdiff_t>(drop - lag),
                        input.y.begin() + static_cast<std::ptrdiff_t>(t0 - lag));
    out.control_names.push_back("y_lag" + std::to_string(lag));
  }
  if (opt.add_first_pc) {
    z_cols.push_back(first_principal_component(out.dataset.x));
    out.control_names.push_back("pc1");
  }

  out.dataset.z = Matrix(t, z_cols.size());
  for (std::size_t j = 0; j < z_cols.size(); ++j)
    std::copy(z_cols[j].begin(), z_cols[j].end(), out.dataset.z.col(j));

  out.x_means.assign(n, 0.0);
  out.x_scales.assign(n, 1.0);
  if (opt.standardize) {
    for (std::size_t j = 0; j < n; ++j) {
      double* c = out.dataset.x.col(j);
      const double m = mean_of(c, t);
      const double sd = std::sqrt(variance_of(c, t));
      out.x_means[j] = m;
      out.x_scales[j] = sd > 0.0 ? sd : 1.0;
      const double inv = 1.0 / out.x_scales[j];
      for (std::size_t i = 0; i < t; ++i) c[i] = (c[i] - m) * inv;
    }
  }
  out.dataset.validate();
  return out;
}

MethodReport summarize_selection(const Dataset& ds, const SelectionResult& sel,
                                 Method method, bool add_intercept) {
  MethodReport rep;
  rep.method = method_name(method);
  rep.selected = sel.selected;
  for (std::size_t idx : sel.selected)
    rep.selected_names.push_back(ds.candidate_names.empty()
                                     ? "x" + std::to_string(idx + 1)
                                     : ds.candidate_names[idx]);
  const std::size_t offset = (add_intercept ? 1 : 0) + ds.zeta();
  for (std::size_t j = 0; j < sel.selected.size(); ++j) {
    rep.coefficients.push_back(sel.post_fit.coefficients[offset + j]);
    rep.se.push_back(sel.post_fit.se.empty() ? 0.0 : sel.post_fit.se[offset + j]);
    rep.t_stats.push_back(sel.post_fit.t_stats.empty() ? 0.0
                                                       : sel.post_fit.t_stats[offset + j]);
  }
  rep.lambda = sel.lambda;
  const double t = static_cast<double>(ds.rows());
  rep.rmse_in_sample = std::sqrt(sel.post_fit.rss / t);
  rep.bic = t * std::log(std::max(sel.post_fit.rss / t, 1e-300)) +
            static_cast<double>(sel.post_fit.rank) * std::log(t);
  return rep;
}

namespace {

double predict_row(const Dataset& full, const SelectionResult& sel, bool add_intercept,
                   std::size_t row) {
  double pred = 0.0;
  std::size_t pos = 0;
  if (add_intercept) pred += sel.post_fit.coefficients[pos++];
  for (std::size_t j = 0; j < full.zeta(); ++j)
    pred += sel.post_fit.coefficients[pos++] * full.z(row, j);
  for (std::size_t j = 0; j < full.n_candidates(); ++j)
    if (sel.coefficients_full[j] != 0.0) pred += sel.coefficients_full[j] * full.x(row, j);
  return pred;
}

}  // namespace

ReportBundle forecast_evaluate(const Dataset& ds, const ForecastSplit& split,
                               const std::vector<Method>& methods,
                               const std::vector<std::size_t>& horizons,
                               const SelectionConfig& selcfg, const LassoConfig& lasso_cfg) {
  ds.validate();
  const std::size_t t = ds.rows();
  std::size_t train_len = split.train_length;
  if (train_len == 0) {
    if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0))
      throw InvalidArgument("forecast_evaluate: train_fraction must lie in (0,1)");
    train_len = static_cast<std::size_t>(std::floor(split.train_fraction * t));
  }
  if (train_len <= ds.zeta() + 5)
    throw InsufficientRows("forecast_evaluate: training window too short");
  if (train_len >= t)
    throw InsufficientRows("forecast_evaluate: evaluation window is empty");
  if (horizons.empty()) throw InvalidArgument("forecast_evaluate: no horizons");

  const std::size_t n_eval = t - train_len;
  double train_mean = 0.0;
  for (std::size_t i = 0; i < train_len; ++i) train_mean += ds.y[i];
  train_mean /= static_cast<double>(train_len);

  ReportBundle bundle;
  bundle.rows_used = t;
  for (Method m : methods) {
    MethodReport rep;
    bool have_summary = false;
    for (std::size_t h : horizons) {
      if (h == 0) throw InvalidArgument("forecast_evaluate: horizon must be >= 1");
      if (train_len <= h + ds.zeta() + 2)
        throw InsufficientRows("forecast_evaluate: horizon too long for the training window");
      const std::size_t pairs = train_len - h;  // feature rows 0..pairs-1, target t+h

      Dataset train;
      train.y.assign(ds.y.begin() + static_cast<std::ptrdiff_t>(h),
                     ds.y.begin() + static_cast<std::ptrdiff_t>(train_len));
      train.z = Matrix(pairs, ds.zeta());
      for (std::size_t j = 0; j < ds.zeta(); ++j)
        std::memcpy(train.z.col(j), ds.z.col(j), pairs * sizeof(double));
      train.x = Matrix(pairs, ds.n_candidates());
      for (std::size_t j = 0; j < ds.n_candidates(); ++j)
        std::memcpy(train.x.col(j), ds.x.col(j), pairs * sizeof(double));
      train.candidate_names = ds.candidate_names;

      const SelectionResult sel = run_method(m, train, selcfg, lasso_cfg);
      if (!have_summary) {
        rep = summarize_selection(train, sel, m, selcfg.add_intercept);
        have_summary = true;
      }

      std::vector<double> actual(n_eval), pred(n_eval);
      for (std::size_t i = 0; i < n_eval; ++i) {
        const std::size_t target_row = train_len + i;
        actual[i] = ds.y[target_row];
        pred[i] = predict_row(ds, sel, selcfg.add_intercept, target_row - h);
      }
      ForecastStat st;
      st.horizon = h;
      const std::size_t head = std::min(h, n_eval);
      st.rmsfe = rmsfe(std::vector<double>(actual.begin(), actual.begin() + head),
                       std::vector<double>(pred.begin(), pred.begin() + head));
      st.r2_oos = r2_oos(actual, pred, train_mean);
      rep.forecasts.push_back(st);
    }
    bundle.methods.push_back(std::move(rep));
  }
  return bundle;
}

}  // namespace bmt
