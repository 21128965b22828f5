/*
 * Copyright 2026 The Taxometer Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// AVX2 lane of the vector kernels. This translation unit is the only one
// built with -mavx2; it must never be entered on CPUs without AVX2 (the
// dispatcher in kernels.cpp checks first).

#include <immintrin.h>

#include <span>

namespace taxometer::kernels::detail {

namespace {

// Horizontal sum of 4 doubles.
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot_avx2(std::span<const float> u, std::span<const float> v) {
  const float* a = u.data();
  const float* b = v.data();
  std::size_t n = u.size();

  // Products of two floats are exact in double, so accumulate in double
  // lanes; only the summation order differs from the scalar reference.
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 fa = _mm256_loadu_ps(a + i);
    __m256 fb = _mm256_loadu_ps(b + i);
    __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(fa));
    __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(fa, 1));
    __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(fb));
    __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(fb, 1));
    acc0 = _mm256_fmadd_pd(a_lo, b_lo, acc0);
    acc1 = _mm256_fmadd_pd(a_hi, b_hi, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

double squared_norm_avx2(std::span<const float> v) { return dot_avx2(v, v); }

}  // namespace taxometer::kernels::detail
