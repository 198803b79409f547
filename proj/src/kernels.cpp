#include "bmt/kernels.hpp"

#include <atomic>

namespace bmt::kernels {

#if !defined(__x86_64__) && !defined(_M_X64)
namespace detail {
const Ops* avx2_ops_or_null() { return nullptr; }
}
#endif

namespace {

std::atomic<const detail::Ops*> g_ops{nullptr};

const detail::Ops* pick_default() {
  if (avx2_supported()) {
    if (const detail::Ops* o = detail::avx2_ops_or_null()) return o;
  }
  return &detail::scalar_ops;
}

const detail::Ops& ops() {
  const detail::Ops* o = g_ops.load(std::memory_order_acquire);
  if (!o) {
    o = pick_default();
    g_ops.store(o, std::memory_order_release);
  }
  return *o;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  return &ops() == &detail::scalar_ops ? Backend::scalar : Backend::avx2;
}

void force_backend(Backend b) {
  const detail::Ops* o = &detail::scalar_ops;
  if (b == Backend::avx2 && avx2_supported()) {
    if (const detail::Ops* a = detail::avx2_ops_or_null()) o = a;
  }
  g_ops.store(o, std::memory_order_release);
}

void reset_backend() { g_ops.store(pick_default(), std::memory_order_release); }

double dot(const double* a, const double* b, std::size_t n) { return ops().dot(a, b, n); }
double sumsq(const double* a, std::size_t n) { return ops().sumsq(a, n); }
double sum(const double* a, std::size_t n) { return ops().sum(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { ops().axpy(alpha, x, y, n); }
void dot_sumsq(const double* x, const double* y, std::size_t n, double* xy, double* xx) {
  ops().dot_sumsq(x, y, n, xy, xx);
}

}  // namespace bmt::kernels
