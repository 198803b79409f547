#pragma once

#include <cstddef>

// Vector kernels underneath all dense linear algebra. A scalar reference
// implementation always exists; an AVX2+FMA variant is picked at runtime when
// the CPU supports it. Backends can differ in the last few ulps (summation
// order), which every downstream tolerance absorbs.
namespace bmt::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool avx2_supported();

// Test hook. Forcing avx2 on hardware without it silently keeps scalar.
void force_backend(Backend b);
void reset_backend();

double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// *xy = x.y and *xx = x.x in a single pass
void dot_sumsq(const double* x, const double* y, std::size_t n, double* xy, double* xx);

namespace detail {
struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*dot_sumsq)(const double*, const double*, std::size_t, double*, double*);
};
extern const Ops scalar_ops;
const Ops* avx2_ops_or_null();
}  // namespace detail

}  // namespace bmt::kernels
