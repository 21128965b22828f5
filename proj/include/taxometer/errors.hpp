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

#ifndef TAXOMETER_ERRORS_HPP
#define TAXOMETER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace taxometer {

/// Base class for all taxometer failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: CSV rows, word-vector files, JSON documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structural invariant violations: cycles, orphans, duplicate codes,
/// records citing unknown nodes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration: unknown backend, unresolvable path, conflicting
/// dimension filters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric's precondition cannot be met on the given input, or a backend
/// failed while it was computed.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxometer

#endif  // TAXOMETER_ERRORS_HPP
