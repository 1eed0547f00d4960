#pragma once
// Low-level reduction kernels used by the estimators.
//
// Each kernel has a portable scalar reference implementation and an AVX2
// variant; the active implementation is chosen once at runtime from CPU
// capabilities.  The AVX2 variants accumulate in the same order as four
// independent scalar lanes followed by a fixed-order lane reduction, so
// results are deterministic for a given build, and the equivalence tests
// pin them against the scalar versions.

#include <cstddef>

namespace ivxj::kern {

// Sum of a[0..n)
double sum(const double* a, std::size_t n);
// Dot product of a and b
double dot(const double* a, const double* b, std::size_t n);
// Sum of squares of a
double dot_self(const double* a, std::size_t n);

// Force a specific implementation (used by tests); true = use AVX2 if the
// CPU supports it (the default), false = scalar only.
void set_simd_enabled(bool enabled);
bool simd_active();

namespace detail {
double sum_scalar(const double* a, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
double dot_self_scalar(const double* a, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
double dot_self_avx2(const double* a, std::size_t n);
bool cpu_has_avx2();
}  // namespace detail

}  // namespace ivxj::kern
