// Acceptance gate for the selection engine, the Monte Carlo laboratory, and
// the numerical core. Each criterion prints a single PASS/FAIL line with the
// measured values; the process exit code is the number of failed criteria.
// Criteria 1-3 are scaled Monte Carlo surrogates of the full study, 4-6 are
// behavioural checks on known designs, 7 is an oracle suite for the numeric
// kernels, 8 calibrates the data-generating process at long range, and 9 is
// an informational note on what this gate deliberately leaves out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "bmt/lasso.hpp"
#include "bmt/linalg.hpp"
#include "bmt/metrics.hpp"
#include "bmt/normal.hpp"
#include "bmt/regression.hpp"
#include "bmt/rng.hpp"
#include "bmt/selector.hpp"
#include "bmt/simulation.hpp"
#include "oracles.hpp"

using namespace bmt;

namespace {

constexpr std::uint64_t kMasterSeed = 42;
constexpr std::size_t kGridReps = 500;

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int emit(int idx, const Outcome& o, double seconds, bool note = false) {
  std::printf("criterion %d: %s - %s [%.1fs]\n", idx,
              note ? "PASS (note)" : (o.pass ? "PASS" : "FAIL"), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

DgpConfig scaled_design(std::size_t k, double vif, double pi, std::size_t n,
                        std::size_t t) {
  DgpConfig cfg;
  cfg.k = k;
  cfg.vif = vif;
  cfg.pi = pi;
  cfg.n = n;
  cfg.t = t;
  cfg.beta.assign(k, 1.0);
  return cfg;
}

// ---- criterion 1: selection accuracy on the scaled factor designs ----------

Outcome criterion1() {
  const SelectionConfig sc;  // p = 0.05, c = 1, delta = delta* = 1
  const std::vector<DgpConfig> designs = {
      scaled_design(4, 4.0, 0.75, 100, 300),  // (a) strong common factors
      scaled_design(4, 2.0, 0.25, 100, 300),  // (b) moderate collinearity
  };
  const auto res = run_grid(designs, kGridReps, {Method::bmt, Method::ocmt}, sc, 0,
                            kMasterSeed);
  const double bmt_a = res[0].by_method.at(Method::bmt).mcc;
  const double ocmt_a = res[0].by_method.at(Method::ocmt).mcc;
  const double bmt_b = res[1].by_method.at(Method::bmt).mcc;

  Outcome o;
  o.pass = bmt_a >= 0.95 && ocmt_a <= 0.20 && bmt_b >= 0.95;
  o.detail = "mcc(vif4,pi.75): bmt " + fmt(bmt_a) + " (need >=0.95), ocmt " +
             fmt(ocmt_a) + " (need <=0.20); mcc(vif2,pi.25): bmt " + fmt(bmt_b) +
             " (need >=0.95); " + std::to_string(kGridReps) + " reps";
  return o;
}

// ---- criterion 2: model size when the baseline saturates -------------------

Outcome criterion2() {
  const SelectionConfig sc;
  const auto res = run_grid({scaled_design(1, 4.0, 0.75, 300, 300)}, kGridReps,
                            {Method::bmt, Method::ocmt}, sc, 0, kMasterSeed);
  const double bmt_size = res[0].by_method.at(Method::bmt).model_size;
  const double ocmt_size = res[0].by_method.at(Method::ocmt).model_size;

  Outcome o;
  o.pass = bmt_size >= 1.0 && bmt_size <= 1.3 && ocmt_size >= 100.0;
  o.detail = "avg size: bmt " + fmt(bmt_size) + " (need in [1.0,1.3]), ocmt " +
             fmt(ocmt_size) + " (need >=100); k=1, n=T=300";
  return o;
}

// ---- criterion 3: coefficient RMSE against the penalized baselines ---------

Outcome criterion3() {
  const SelectionConfig sc;
  const auto res =
      run_grid({scaled_design(4, 2.0, 0.25, 100, 300)}, kGridReps,
               {Method::bmt, Method::lasso_cv, Method::adaptive_lasso}, sc, 0,
               kMasterSeed);
  const double r_bmt = res[0].by_method.at(Method::bmt).rmse;
  const double r_lasso = res[0].by_method.at(Method::lasso_cv).rmse;
  const double r_ada = res[0].by_method.at(Method::adaptive_lasso).rmse;

  Outcome o;
  o.pass = r_bmt <= 0.30 && r_bmt < r_ada && r_bmt <= 0.65 * r_lasso;
  o.detail = "rmse: bmt " + fmt(r_bmt) + " (need <=0.30), adaptive " + fmt(r_ada) +
             " (need > bmt), cv lasso " + fmt(r_lasso) +
             " (need bmt <= 0.65x = " + fmt(0.65 * r_lasso) + ")";
  return o;
}

// ---- criterion 4: proxy wedge where the lasso is inconsistent --------------

Outcome criterion4() {
  const SelectionConfig sc;
  const LassoConfig lc;
  const std::size_t seeds = 200;
  const std::vector<std::size_t> truth = {0, 1};

  std::size_t bmt_exact65 = 0, lasso_x3_65 = 0, bmt_exact30 = 0, lasso_exact30 = 0;
  for (std::size_t pass = 0; pass < 2; ++pass) {
    const double rho = pass == 0 ? 0.65 : 0.3;
    for (std::size_t s = 0; s < seeds; ++s) {
      CounterRng rng(CounterRng::derive_key(kMasterSeed, 40 + pass, s));
      const Dataset ds = generate_wedge(2000, 0.2, rho, 0.5, rng);
      const auto b = bmt_select(ds, sc);
      const auto l = lasso_select_bic(ds, lc);
      const bool b_exact = sorted_copy(b.selected) == truth;
      const bool l_exact = sorted_copy(l.selected) == truth;
      const bool l_x3 = std::find(l.selected.begin(), l.selected.end(),
                                  std::size_t{2}) != l.selected.end();
      if (pass == 0) {
        bmt_exact65 += b_exact;
        lasso_x3_65 += l_x3;
      } else {
        bmt_exact30 += b_exact;
        lasso_exact30 += l_exact;
      }
    }
  }

  const double f_bmt65 = static_cast<double>(bmt_exact65) / seeds;
  const double f_lx3 = static_cast<double>(lasso_x3_65) / seeds;
  const double f_bmt30 = static_cast<double>(bmt_exact30) / seeds;
  const double f_l30 = static_cast<double>(lasso_exact30) / seeds;

  Outcome o;
  o.pass = f_bmt65 >= 0.90 && f_lx3 >= 0.70 && f_bmt30 >= 0.90 && f_l30 >= 0.90;
  o.detail = "rho=0.65: bmt exact " + fmt(f_bmt65) + " (need >=0.90), lasso picks proxy " +
             fmt(f_lx3) + " (need >=0.70); rho=0.30: bmt exact " + fmt(f_bmt30) +
             ", lasso exact " + fmt(f_l30) + " (both need >=0.90)";
  return o;
}

// ---- criterion 5: family-wise error on pure noise ---------------------------

Outcome criterion5() {
  const SelectionConfig sc;
  const std::size_t t = 300, n = 100, seeds = 1000;
  std::size_t any_selected = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    CounterRng rng(CounterRng::derive_key(kMasterSeed, 50, s));
    Dataset ds;
    ds.y.resize(t);
    for (double& v : ds.y) v = rng.normal();
    ds.z = Matrix(t, 0);
    ds.x = Matrix(t, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < t; ++i) ds.x(i, j) = rng.normal();
    if (!bmt_select(ds, sc).selected.empty()) ++any_selected;
  }
  const double rate = static_cast<double>(any_selected) / seeds;

  Outcome o;
  o.pass = rate <= 0.10;
  o.detail = "false-selection rate " + fmt(rate) + " (" + std::to_string(any_selected) +
             "/" + std::to_string(seeds) + ", need <=0.10) at p=0.05, delta=1";
  return o;
}

// ---- criterion 6: post-selection inference on two orthogonal signals -------

Outcome criterion6() {
  const SelectionConfig sc;
  const std::size_t t = 500, reps = 1000;
  const double z975 = normal_quantile(0.975);
  const double sd_target = 1.0 / std::sqrt(static_cast<double>(t));

  std::size_t covered[2] = {0, 0}, counted[2] = {0, 0};
  double sum[2] = {0.0, 0.0}, sumsq[2] = {0.0, 0.0};
  for (std::size_t r = 0; r < reps; ++r) {
    CounterRng rng(CounterRng::derive_key(kMasterSeed, 60, r));
    Dataset ds;
    ds.z = Matrix(t, 0);
    ds.x = Matrix(t, 2);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < t; ++i) ds.x(i, j) = rng.normal();
    ds.y.resize(t);
    for (std::size_t i = 0; i < t; ++i)
      ds.y[i] = ds.x(i, 0) + ds.x(i, 1) + rng.normal();

    const auto res = bmt_select(ds, sc);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto it = std::find(res.selected.begin(), res.selected.end(), i);
      if (it == res.selected.end()) continue;
      const std::size_t pos =
          1 + static_cast<std::size_t>(it - res.selected.begin());  // after intercept
      const double b = res.post_fit.coefficients[pos];
      const double se = res.post_fit.se[pos];
      ++counted[i];
      if (std::fabs(b - 1.0) <= z975 * se) ++covered[i];
      sum[i] += b;
      sumsq[i] += b * b;
    }
  }

  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 2; ++i) {
    const double m = static_cast<double>(counted[i]);
    const double cover = counted[i] ? static_cast<double>(covered[i]) / m : 0.0;
    const double var = m > 1.0 ? (sumsq[i] - sum[i] * sum[i] / m) / (m - 1.0) : 0.0;
    const double sd = std::sqrt(std::max(0.0, var));
    const bool ok = counted[i] == reps && cover >= 0.93 && cover <= 0.97 &&
                    std::fabs(sd / sd_target - 1.0) <= 0.10;
    pass = pass && ok;
    if (i) detail += "; ";
    detail += "beta" + std::to_string(i + 1) + ": coverage " + fmt(cover) +
              " (need in [0.93,0.97]), sd " + fmt(sd) + " vs " + fmt(sd_target) +
              " (need within 10%)";
  }

  Outcome o;
  o.pass = pass;
  o.detail = detail;
  return o;
}

// ---- criterion 7: numerical core against independent oracles ---------------

bool check7_fwl(std::size_t* bad, double* worst) {
  *bad = 0;
  *worst = 0.0;
  for (std::size_t inst = 0; inst < 1000; ++inst) {
    oracle::TestRng rng(9000 + inst);
    const std::size_t t = 30 + static_cast<std::size_t>(rng.uniform() * 100.0);
    const std::size_t q = static_cast<std::size_t>(rng.uniform() * 6.0);

    Matrix z = oracle::random_matrix(rng, t, q);
    std::vector<double> x = oracle::random_vector(rng, t);
    std::vector<double> y(t);
    for (std::size_t i = 0; i < t; ++i) {
      double v = 0.5 * x[i] + 0.8 * rng.normal();
      for (std::size_t j = 0; j < q; ++j) v += 0.3 * z(i, j);
      y[i] = v;
    }

    StagewiseProjector proj(t);
    const std::vector<double> ones(t, 1.0);
    proj.absorb(ones.data());
    for (std::size_t j = 0; j < q; ++j) proj.absorb(z.col(j));
    std::vector<double> xt = x, yt = y;
    proj.residualize(xt.data());
    proj.residualize(yt.data());
    const auto stat = fwl_candidate_stat(xt.data(), yt.data(), t, t - q - 2,
                                         variance_of(x.data(), t), false);

    Matrix w(t, q + 2);
    for (std::size_t i = 0; i < t; ++i) w(i, 0) = 1.0;
    for (std::size_t j = 0; j < q; ++j) w.set_col(1 + j, z.col(j));
    w.set_col(q + 1, x.data());
    const double joint = oracle::joint_t_stat(w, y, q + 1);

    const double err = std::fabs(stat.t - joint) / std::max(1.0, std::fabs(joint));
    *worst = std::max(*worst, err);
    if (!(err <= 1e-6)) ++*bad;
  }
  return *bad == 0;
}

bool check7_kkt(double* worst) {
  *worst = 0.0;
  for (std::size_t inst = 0; inst < 100; ++inst) {
    oracle::TestRng rng(7700 + inst);
    const std::size_t t = 40 + static_cast<std::size_t>(rng.uniform() * 80.0);
    const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 36.0);
    const Matrix x = oracle::random_matrix(rng, t, n);
    std::vector<double> y(t);
    for (std::size_t i = 0; i < t; ++i)
      y[i] = 1.2 * x(i, 0) - 0.7 * x(i, n / 2) + 0.5 * rng.normal();
    const LassoPath path = lasso_path(y, x, 20, 1e-2);
    for (std::size_t l = 0; l < path.lambdas.size(); ++l)
      *worst = std::max(*worst, max_kkt_violation(y, x, path, l));
  }
  return *worst < 1e-6;
}

bool check7_metrics(std::size_t* tuples, std::size_t* bad) {
  *tuples = 0;
  *bad = 0;
  const double tol = 1e-15;
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t tp = 0; tp <= n; ++tp)
      for (std::size_t fp = 0; fp + tp <= n; ++fp)
        for (std::size_t fn = 0; tp + fp + fn <= n; ++fn) {
          const std::size_t tn = n - tp - fp - fn;
          ++*tuples;

          // selected = [0,tp) u [tp+fn, tp+fn+fp); true = [0, tp+fn)
          std::vector<std::size_t> sel, tru;
          for (std::size_t i = 0; i < tp; ++i) sel.push_back(i);
          for (std::size_t i = 0; i < fp; ++i) sel.push_back(tp + fn + i);
          for (std::size_t i = 0; i < tp + fn; ++i) tru.push_back(i);

          const ConfusionCounts c = confusion(sel, tru, n);
          if (c.tp != tp || c.fp != fp || c.tn != tn || c.fn != fn) {
            ++*bad;
            continue;
          }

          const double dtp = static_cast<double>(tp), dfp = static_cast<double>(fp);
          const double dtn = static_cast<double>(tn), dfn = static_cast<double>(fn);
          const double den2 =
              (dtp + dfp) * (dtp + dfn) * (dtn + dfp) * (dtn + dfn);
          const double e_mcc =
              den2 > 0.0 ? (dtp * dtn - dfp * dfn) / std::sqrt(den2) : 0.0;
          const double e_f1 =
              (2.0 * dtp + dfp + dfn) > 0.0 ? 2.0 * dtp / (2.0 * dtp + dfp + dfn) : 0.0;
          const double e_tdr = (dtp + dfp) > 0.0 ? dtp / (dtp + dfp) : 0.0;
          const double e_fdr = (dtp + dfp) > 0.0 ? dfp / (dtp + dfp) : 0.0;
          const double e_tpr = (dtp + dfn) > 0.0 ? dtp / (dtp + dfn) : 1.0;
          const double e_fpr = (dfp + dtn) > 0.0 ? dfp / (dfp + dtn) : 0.0;

          const bool ok = std::fabs(mcc(c) - e_mcc) <= tol &&
                          std::fabs(f1(c) - e_f1) <= tol &&
                          std::fabs(tdr(c) - e_tdr) <= tol &&
                          std::fabs(fdr(c) - e_fdr) <= tol &&
                          std::fabs(tpr(c) - e_tpr) <= tol &&
                          std::fabs(fpr(c) - e_fpr) <= tol;
          if (!ok) ++*bad;
        }
  return *bad == 0;
}

bool check7_quantile(double* worst) {
  // Reference values from a 40-digit computation of sqrt(2) erfinv(2p - 1)
  // evaluated at the exact binary double p. Probes stay clear of the upper
  // tail where representing p as a double already costs more than 1e-9.
  static const struct {
    double p, q;
  } table[] = {
      {1e-12, -7.03448382530113193261},
      {1e-9, -5.99780701500768686145},
      {1e-6, -4.75342430882289895734},
      {1e-4, -3.71901648545568055229},
      {1e-3, -3.09023230616781353536},
      {0.01, -2.32634787404084109308},
      {0.025, -1.95996398454005421178},
      {0.05, -1.64485362695147268795},
      {0.1, -1.28155156554460043533},
      {0.2, -0.841621233572914165522},
      {0.3, -0.524400512708040815969},
      {0.4, -0.253347103135799741325},
      {0.5, 0.0},
      {0.6, 0.253347103135799741325},
      {0.75, 0.674489750196081743202},
      {0.9, 1.28155156554460059349},
      {0.975, 1.9599639845400538556},
      {0.999, 3.09023230616781327776},
      {0.9999, 3.71901648545570838672},
      {0.999975, 4.05562698112190798441},
  };
  *worst = 0.0;
  for (const auto& row : table) {
    const double got = normal_quantile(row.p);
    const double err = row.q == 0.0 ? std::fabs(got)
                                    : std::fabs(got / row.q - 1.0);
    *worst = std::max(*worst, err);
  }
  return *worst <= 1e-9;
}

Outcome criterion7() {
  std::size_t fwl_bad = 0, mt_tuples = 0, mt_bad = 0;
  double fwl_worst = 0.0, kkt_worst = 0.0, q_worst = 0.0;
  const bool ok_fwl = check7_fwl(&fwl_bad, &fwl_worst);
  const bool ok_kkt = check7_kkt(&kkt_worst);
  const bool ok_mt = check7_metrics(&mt_tuples, &mt_bad);
  const bool ok_q = check7_quantile(&q_worst);

  Outcome o;
  o.pass = ok_fwl && ok_kkt && ok_mt && ok_q;
  o.detail = "fwl-vs-joint worst rel " + fmt(fwl_worst, 3) + " on 1000 designs (need <=1e-6), " +
             "kkt worst " + fmt(kkt_worst, 3) + " on 100 paths (need <1e-6), " +
             "metrics " + std::to_string(mt_tuples - mt_bad) + "/" +
             std::to_string(mt_tuples) + " count tuples exact, " +
             "quantile worst rel " + fmt(q_worst, 3) + " at 20 probes (need <=1e-9)";
  return o;
}

// ---- criterion 8: long-range calibration of the factor design --------------

Outcome criterion8() {
  struct Probe {
    double vif, pi;
    std::size_t k;
  };
  const Probe probes[] = {{2.0, 0.25, 4}, {4.0, 0.75, 4}, {4.0, 0.75, 1}};

  bool pass = true;
  std::string detail;
  for (std::size_t idx = 0; idx < 3; ++idx) {
    const Probe& pr = probes[idx];
    DgpConfig cfg = scaled_design(pr.k, pr.vif, pr.pi, 2 * pr.k + 1, 1000000);
    CounterRng rng(CounterRng::derive_key(kMasterSeed, 80, idx));
    const DgpRealization real = generate_dgp(cfg, rng);
    const Dataset& ds = real.dataset;
    const std::size_t t = ds.rows();

    // Average pairwise correlation across the factor-loaded block. With a
    // single signal the (signal, pseudo-signal) pair carries the same
    // loadings, so the target gamma / (1 + gamma) is unchanged.
    std::vector<std::size_t> block = real.signal_set;
    if (block.size() < 2) block.push_back(real.pseudo_set.at(0));
    double corr_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) {
        const double* ca = ds.x.col(block[a]);
        const double* cb = ds.x.col(block[b]);
        corr_sum += oracle::sample_corr(std::vector<double>(ca, ca + t),
                                        std::vector<double>(cb, cb + t));
        ++pairs;
      }
    const double corr = corr_sum / static_cast<double>(pairs);
    const double corr_target = real.derived.gamma / (1.0 + real.derived.gamma);

    // Conditional fit: strip the autoregressive part, regress on the signals.
    std::vector<double> v(t);
    for (std::size_t i = 0; i < t; ++i) v[i] = ds.y[i] - cfg.alpha * ds.z(i, 0);
    Matrix w(t, 1 + real.signal_set.size());
    for (std::size_t i = 0; i < t; ++i) w(i, 0) = 1.0;
    for (std::size_t j = 0; j < real.signal_set.size(); ++j)
      w.set_col(1 + j, ds.x.col(real.signal_set[j]));
    const RegressionFit fit = ols_fit(v, w);
    const double vbar = mean_of(v.data(), t);
    double tss = 0.0;
    for (double u : v) tss += (u - vbar) * (u - vbar);
    const double r2 = 1.0 - fit.rss / tss;

    const bool ok = std::fabs(corr - corr_target) <= 0.02 && std::fabs(r2 - 0.7) <= 0.02;
    pass = pass && ok;
    if (idx) detail += "; ";
    detail += "(vif " + fmt(pr.vif, 2) + ", pi " + fmt(pr.pi, 2) + ", k " +
              std::to_string(pr.k) + "): corr " + fmt(corr) + " vs " +
              fmt(corr_target) + ", R2 " + fmt(r2) + " vs 0.7 (both +-0.02)";
  }

  Outcome o;
  o.pass = pass;
  o.detail = detail;
  return o;
}

// ---- criterion 9: scope note ------------------------------------------------

Outcome criterion9() {
  Outcome o;
  o.pass = true;
  o.detail =
      "full-scale replication (the complete 180-design grid, multi-thousand-rep "
      "tables, and the empirical forecasting panels) runs far beyond this gate; "
      "criteria 1-3 are its sanctioned scaled surrogates and 4-8 are exact "
      "property and oracle suites";
  return o;
}

}  // namespace

int main() {
  std::printf("acceptance gate: master seed %llu, %zu Monte Carlo reps per design\n",
              static_cast<unsigned long long>(kMasterSeed), kGridReps);
  std::fflush(stdout);

  int failures = 0;
  const auto timed = [&](int idx, Outcome (*fn)(), bool note = false) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = fn();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += emit(idx, o, secs, note);
  };

  timed(1, criterion1);
  timed(2, criterion2);
  timed(3, criterion3);
  timed(4, criterion4);
  timed(5, criterion5);
  timed(6, criterion6);
  timed(7, criterion7);
  timed(8, criterion8);
  timed(9, criterion9, true);

  std::printf("acceptance gate: %d of 9 criteria failed\n", failures);
  return failures;
}
