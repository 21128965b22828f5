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

#ifndef TAXOMETER_KERNELS_HPP
#define TAXOMETER_KERNELS_HPP

#include <span>
#include <string_view>

// Dense-vector inner loops behind the similarity backends. A robustness run
// over a large taxonomy evaluates on the order of 1e8 cosine scores, so the
// products are accumulated in double and the hot path is vectorized. The
// implementation is picked once at runtime: AVX2 when the CPU has it,
// otherwise the scalar reference. Both are exported so equivalence tests can
// compare them directly.

namespace taxometer::kernels {

/// Scalar reference implementations.
double dot_scalar(std::span<const float> u, std::span<const float> v);
double squared_norm_scalar(std::span<const float> v);

/// Runtime-dispatched variants. Pre: u.size() == v.size().
double dot(std::span<const float> u, std::span<const float> v);
double squared_norm(std::span<const float> v);

/// Name of the implementation dot()/squared_norm() dispatch to
/// ("scalar" or "avx2").
std::string_view active_implementation();

}  // namespace taxometer::kernels

#endif  // TAXOMETER_KERNELS_HPP
