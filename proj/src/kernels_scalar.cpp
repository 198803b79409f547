#include "bmt/kernels.hpp"

namespace bmt::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sumsq_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void dot_sumsq_scalar(const double* x, const double* y, std::size_t n,
                      double* xy, double* xx) {
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  *xy = sxy;
  *xx = sxx;
}

}  // namespace

namespace detail {
const Ops scalar_ops = {dot_scalar, sumsq_scalar, sum_scalar, axpy_scalar,
                        dot_sumsq_scalar};
}

}  // namespace bmt::kernels
