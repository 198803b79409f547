#include "bmt/selector.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bmt/errors.hpp"
#include "bmt/kernels.hpp"
#include "bmt/normal.hpp"

namespace bmt {

double critical_value(double p, std::size_t n_active, double delta, double c) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("critical_value: p must lie in (0,1)");
  if (!(c > 0.0)) throw InvalidArgument("critical_value: c must be positive");
  if (n_active == 0) throw InvalidArgument("critical_value: active count must be positive");
  const double q = p / (2.0 * c * std::pow(static_cast<double>(n_active), delta));
  if (!(q > 0.0 && q < 1.0))
    throw InvalidArgument("critical_value: quantile argument outside (0,1)");
  if (q >= 0.5)
    throw InvalidArgument("critical_value: requires c*n^delta > p/2");
  return -normal_quantile(q);
}

namespace {

void validate_config(const SelectionConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw InvalidArgument("selection: p must lie in (0,1)");
  if (!(cfg.c > 0.0)) throw InvalidArgument("selection: c must be positive");
  if (!(cfg.delta > 0.0)) throw InvalidArgument("selection: delta must be positive");
  if (cfg.delta_star && *cfg.delta_star < cfg.delta)
    throw InvalidArgument("selection: delta_star must be >= delta");
}

SelectionResult select_impl(const Dataset& ds, const SelectionConfig& cfg, bool single_pick) {
  ds.validate();
  validate_config(cfg);
  const std::size_t t = ds.rows();
  const std::size_t n = ds.n_candidates();

  StagewiseProjector proj(t);
  if (cfg.add_intercept) {
    const std::vector<double> ones(t, 1.0);
    proj.absorb(ones.data());
  }
  for (std::size_t j = 0; j < ds.z.cols(); ++j)
    if (!proj.absorb(ds.z.col(j)))
      throw RankDeficient("control column " + std::to_string(j + 1) + " is collinear");
  const std::size_t q0 = proj.size();

  std::vector<double> ytil = ds.y;
  proj.residualize(ytil.data());

  Matrix xtil(t, n);
  std::vector<double> var_orig(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::memcpy(xtil.col(j), ds.x.col(j), t * sizeof(double));
    var_orig[j] = variance_of(xtil.col(j), t);
    proj.residualize(xtil.col(j));
  }

  std::size_t stage_budget = t > q0 + 2 ? std::min(n, t - q0 - 2) : 0;
  if (cfg.max_stages > 0) stage_budget = std::min(cfg.max_stages, n);

  SelectionResult res;
  std::vector<std::size_t> active(n);
  for (std::size_t j = 0; j < n; ++j) active[j] = j;

  const auto admit = [&](std::size_t idx) {
    res.selected.push_back(idx);
    if (proj.absorb(ds.x.col(idx))) {
      proj.residualize_against_last(ytil.data());
      for (std::size_t a : active)
        if (a != idx) proj.residualize_against_last(xtil.col(a));
    }
    active.erase(std::find(active.begin(), active.end(), idx));
  };

  for (std::size_t stage = 1; stage <= stage_budget && !active.empty(); ++stage) {
    if (t < proj.size() + 3) break;  // residual df would drop below 2
    const std::size_t df = t - proj.size() - 1;

    StageRecord rec;
    rec.stage = stage;
    rec.active_set = active;
    rec.threshold = critical_value(cfg.p, cfg.shrink_n_per_stage ? active.size() : n,
                                   cfg.stage_exponent(stage), cfg.c);
    rec.t_stats.reserve(active.size());
    rec.degenerate.reserve(active.size());

    double best_abs = 0.0;
    std::optional<std::size_t> best;
    for (std::size_t idx : active) {
      const CandidateStat s =
          fwl_candidate_stat(xtil.col(idx), ytil.data(), t, df, var_orig[idx], cfg.robust_se);
      rec.t_stats.push_back(s.degenerate ? 0.0 : s.t);
      rec.degenerate.push_back(s.degenerate ? 1 : 0);
      const double a = std::abs(rec.t_stats.back());
      if (s.degenerate || a <= rec.threshold) continue;
      ++rec.passed_count;
      if (single_pick) {
        if (a > best_abs) {  // strict: ties keep the earlier (lower) index
          best_abs = a;
          best = idx;
        }
      } else {
        rec.admitted.push_back(idx);
      }
    }

    if (single_pick && best) {
      rec.chosen = best;
      rec.admitted.push_back(*best);
    }
    const bool productive = !rec.admitted.empty();
    for (std::size_t idx : rec.admitted) admit(idx);
    res.trace.push_back(std::move(rec));
    if (!productive) break;
  }

  PostSelection post = post_selection_estimate(ds, res.selected, cfg.robust_se,
                                               cfg.add_intercept, cfg.allow_rank_deficient_post);
  res.post_fit = std::move(post.fit);
  res.coefficients_full = std::move(post.coefficients_full);
  res.vcov_selected = std::move(post.vcov_selected);
  res.sigma2_hat = post.sigma2_hat;
  return res;
}

}  // namespace

SelectionResult bmt_select(const Dataset& ds, const SelectionConfig& cfg) {
  return select_impl(ds, cfg, true);
}

SelectionResult ocmt_select(const Dataset& ds, const SelectionConfig& cfg) {
  return select_impl(ds, cfg, false);
}

PostSelection post_selection_estimate(const Dataset& ds,
                                      const std::vector<std::size_t>& selected,
                                      bool robust_se, bool add_intercept,
                                      bool allow_rank_deficient) {
  const std::size_t t = ds.rows();
  const std::size_t n = ds.n_candidates();
  for (std::size_t idx : selected)
    if (idx >= n) throw IndexOutOfRange("post_selection_estimate: index out of range");

  const std::size_t offset = (add_intercept ? 1 : 0) + ds.z.cols();
  Matrix w(t, offset + selected.size());
  std::size_t col = 0;
  if (add_intercept) {
    for (std::size_t i = 0; i < t; ++i) w(i, col) = 1.0;
    ++col;
  }
  for (std::size_t j = 0; j < ds.z.cols(); ++j, ++col)
    std::memcpy(w.col(col), ds.z.col(j), t * sizeof(double));
  for (std::size_t idx : selected) {
    std::memcpy(w.col(col), ds.x.col(idx), t * sizeof(double));
    ++col;
  }

  PostSelection out;
  out.fit = ols_fit(ds.y, w, allow_rank_deficient);
  out.rank_deficient = out.fit.rank_deficient;
  out.sigma2_hat = out.fit.sigma2_hat;
  out.coefficients_full.assign(n, 0.0);
  for (std::size_t j = 0; j < selected.size(); ++j)
    out.coefficients_full[selected[j]] = out.fit.coefficients[offset + j];

  out.vcov_selected = Matrix(selected.size(), selected.size());
  if (!out.rank_deficient && w.cols() > 0) {
    PivotedQr qr = qr_pivoted(w);
    Matrix g = xtx_inverse(qr);
    Matrix v(w.cols(), w.cols());
    if (robust_se) {
      // HC1 sandwich: (W'W)^{-1} W' diag(u^2) W (W'W)^{-1} * T / df
      Matrix meat(w.cols(), w.cols());
      for (std::size_t a = 0; a < w.cols(); ++a)
        for (std::size_t b = a; b < w.cols(); ++b) {
          double s = 0.0;
          const double* ca = w.col(a);
          const double* cb = w.col(b);
          for (std::size_t i = 0; i < t; ++i) {
            const double u = out.fit.residuals[i];
            s += ca[i] * cb[i] * u * u;
          }
          meat(a, b) = s;
          meat(b, a) = s;
        }
      const double scale =
          out.fit.df > 0 ? static_cast<double>(t) / static_cast<double>(out.fit.df) : 0.0;
      for (std::size_t a = 0; a < w.cols(); ++a)
        for (std::size_t b = 0; b < w.cols(); ++b) {
          double s = 0.0;
          for (std::size_t r = 0; r < w.cols(); ++r)
            for (std::size_t q = 0; q < w.cols(); ++q) s += g(a, r) * meat(r, q) * g(q, b);
          v(a, b) = scale * s;
        }
      for (std::size_t j = 0; j < w.cols(); ++j) {
        out.fit.se[j] = v(j, j) > 0.0 ? std::sqrt(v(j, j)) : 0.0;
        if (out.fit.se[j] > 0.0)
          out.fit.t_stats[j] = out.fit.coefficients[j] / out.fit.se[j];
        else if (out.fit.coefficients[j] != 0.0)
          out.fit.t_stats[j] = out.fit.coefficients[j] > 0.0 ? kTStatCap : -kTStatCap;
        else
          out.fit.t_stats[j] = 0.0;
      }
    } else {
      for (std::size_t a = 0; a < w.cols(); ++a)
        for (std::size_t b = 0; b < w.cols(); ++b) v(a, b) = out.fit.sigma2_hat * g(a, b);
    }
    for (std::size_t a = 0; a < selected.size(); ++a)
      for (std::size_t b = 0; b < selected.size(); ++b)
        out.vcov_selected(a, b) = v(offset + a, offset + b);
  }
  return out;
}

}  // namespace bmt
