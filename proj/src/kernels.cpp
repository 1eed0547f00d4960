#include "ivxj/kernels.hpp"

#include <atomic>

#if defined(__x86_64__) || defined(_M_X64)
#define IVXJ_X86 1
#include <immintrin.h>
#else
#define IVXJ_X86 0
#endif

namespace ivxj::kern {
namespace detail {

double sum_scalar(const double* a, std::size_t n) {
  // Four independent accumulators, matching the AVX2 lane layout.
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i];
    s1 += a[i + 1];
    s2 += a[i + 2];
    s3 += a[i + 3];
  }
  double tail = 0;
  for (; i < n; ++i) tail += a[i];
  return ((s0 + s1) + (s2 + s3)) + tail;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((s0 + s1) + (s2 + s3)) + tail;
}

double dot_self_scalar(const double* a, std::size_t n) {
  return dot_scalar(a, a, n);
}

#if IVXJ_X86

__attribute__((target("avx2"))) static double hreduce(__m256d v) {
  // ((lane0 + lane1) + (lane2 + lane3)), same order as the scalar kernels.
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  double l0 = _mm_cvtsd_f64(lo);
  double l1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  double l2 = _mm_cvtsd_f64(hi);
  double l3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
  return (l0 + l1) + (l2 + l3);
}

__attribute__((target("avx2"))) double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double tail = 0;
  for (; i < n; ++i) tail += a[i];
  return hreduce(acc) + tail;
}

__attribute__((target("avx2"))) double dot_avx2(const double* a, const double* b,
                                                std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // mul + add (not fma) so lanes match the scalar reference bit-for-bit
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                           _mm256_loadu_pd(b + i)));
  }
  double tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hreduce(acc) + tail;
}

__attribute__((target("avx2"))) double dot_self_avx2(const double* a, std::size_t n) {
  return dot_avx2(a, a, n);
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

#else

double sum_avx2(const double* a, std::size_t n) { return sum_scalar(a, n); }
double dot_avx2(const double* a, const double* b, std::size_t n) {
  return dot_scalar(a, b, n);
}
double dot_self_avx2(const double* a, std::size_t n) { return dot_self_scalar(a, n); }
bool cpu_has_avx2() { return false; }

#endif

}  // namespace detail

namespace {
std::atomic<bool> g_simd_enabled{true};
bool use_avx2() { return g_simd_enabled.load(std::memory_order_relaxed) &&
                         detail::cpu_has_avx2(); }
}  // namespace

void set_simd_enabled(bool enabled) { g_simd_enabled.store(enabled); }
bool simd_active() { return use_avx2(); }

double sum(const double* a, std::size_t n) {
  return use_avx2() ? detail::sum_avx2(a, n) : detail::sum_scalar(a, n);
}
double dot(const double* a, const double* b, std::size_t n) {
  return use_avx2() ? detail::dot_avx2(a, b, n) : detail::dot_scalar(a, b, n);
}
double dot_self(const double* a, std::size_t n) {
  return use_avx2() ? detail::dot_self_avx2(a, n) : detail::dot_self_scalar(a, n);
}

}  // namespace ivxj::kern
