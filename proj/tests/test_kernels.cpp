#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bmt/kernels.hpp"
#include "oracles.hpp"

using namespace bmt::kernels;

namespace {

double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Lengths straddling the vector width so every tail path runs.
const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 67, 200};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  force_backend(Backend::scalar);
  oracle::TestRng rng(7);
  for (std::size_t n : kLengths) {
    auto a = oracle::random_vector(rng, n);
    auto b = oracle::random_vector(rng, n);
    CHECK(dot(a.data(), b.data(), n) == doctest::Approx(naive_dot(a, b)).epsilon(1e-13));
    CHECK(sumsq(a.data(), n) == doctest::Approx(naive_dot(a, a)).epsilon(1e-13));
    double s = 0.0;
    for (double v : a) s += v;
    CHECK(sum(a.data(), n) == doctest::Approx(s).epsilon(1e-12));
    double xy = -1.0, xx = -1.0;
    dot_sumsq(a.data(), b.data(), n, &xy, &xx);
    CHECK(xy == doctest::Approx(naive_dot(a, b)).epsilon(1e-13));
    CHECK(xx == doctest::Approx(naive_dot(a, a)).epsilon(1e-13));

    auto y = b;
    axpy(0.37, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y[i] == doctest::Approx(b[i] + 0.37 * a[i]).epsilon(1e-14));
  }
  reset_backend();
}

TEST_CASE("simd backend agrees with the scalar reference") {
  if (!avx2_supported()) {
    MESSAGE("no AVX2 on this host, skipping");
    return;
  }
  oracle::TestRng rng(11);
  for (std::size_t n : kLengths) {
    auto a = oracle::random_vector(rng, n);
    auto b = oracle::random_vector(rng, n);

    force_backend(Backend::scalar);
    const double d_s = dot(a.data(), b.data(), n);
    const double q_s = sumsq(a.data(), n);
    const double s_s = sum(a.data(), n);
    double xy_s, xx_s;
    dot_sumsq(a.data(), b.data(), n, &xy_s, &xx_s);
    auto y_s = b;
    axpy(-1.25, a.data(), y_s.data(), n);

    force_backend(Backend::avx2);
    CHECK(active_backend() == Backend::avx2);
    CHECK(dot(a.data(), b.data(), n) == doctest::Approx(d_s).epsilon(1e-13));
    CHECK(sumsq(a.data(), n) == doctest::Approx(q_s).epsilon(1e-13));
    CHECK(sum(a.data(), n) == doctest::Approx(s_s).epsilon(1e-12));
    double xy_v, xx_v;
    dot_sumsq(a.data(), b.data(), n, &xy_v, &xx_v);
    CHECK(xy_v == doctest::Approx(xy_s).epsilon(1e-13));
    CHECK(xx_v == doctest::Approx(xx_s).epsilon(1e-13));
    auto y_v = b;
    axpy(-1.25, a.data(), y_v.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-14));
  }
  reset_backend();
}

TEST_CASE("axpy with large n accumulates no systematic drift") {
  const std::size_t n = 10007;
  std::vector<double> x(n, 1.0), y(n, 2.0);
  axpy(3.0, x.data(), y.data(), n);
  for (std::size_t i = 0; i < n; i += 997) CHECK(y[i] == 5.0);
}

TEST_CASE("forcing avx2 without hardware support keeps the scalar backend") {
  if (avx2_supported()) return;
  force_backend(Backend::avx2);
  CHECK(active_backend() == Backend::scalar);
  reset_backend();
}

TEST_CASE("reset restores the runtime-detected backend") {
  force_backend(Backend::scalar);
  reset_backend();
  CHECK(active_backend() == (avx2_supported() ? Backend::avx2 : Backend::scalar));
}
