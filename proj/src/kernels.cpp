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

#include "taxometer/kernels.hpp"

#include <cassert>

namespace taxometer::kernels {

double dot_scalar(std::span<const float> u, std::span<const float> v) {
  assert(u.size() == v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  }
  return acc;
}

double squared_norm_scalar(std::span<const float> v) {
  return dot_scalar(v, v);
}

#if defined(TAXOMETER_HAVE_AVX2)
namespace detail {
// Defined in kernels_avx2.cpp, compiled with -mavx2.
double dot_avx2(std::span<const float> u, std::span<const float> v);
double squared_norm_avx2(std::span<const float> v);
}  // namespace detail
#endif

namespace {

using DotFn = double (*)(std::span<const float>, std::span<const float>);
using NormFn = double (*)(std::span<const float>);

struct Dispatch {
  DotFn dot = dot_scalar;
  NormFn squared_norm = squared_norm_scalar;
  std::string_view name = "scalar";
};

Dispatch select() {
  Dispatch d;
#if defined(TAXOMETER_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) {
    d.dot = detail::dot_avx2;
    d.squared_norm = detail::squared_norm_avx2;
    d.name = "avx2";
  }
#endif
  return d;
}

const Dispatch& dispatch() {
  static const Dispatch d = select();
  return d;
}

}  // namespace

double dot(std::span<const float> u, std::span<const float> v) {
  return dispatch().dot(u, v);
}

double squared_norm(std::span<const float> v) {
  return dispatch().squared_norm(v);
}

std::string_view active_implementation() { return dispatch().name; }

}  // namespace taxometer::kernels
