// Copyright 2026 The halfheat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hh {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reported in every JSON artifact so that constants are read under the
// right normalization.
inline constexpr const char* kConvention =
    "<f,g> = (1/2pi) int f conj(g) dx = sum_n f^(n) conj(g^(n)); "
    "control norm ||u||^2 = (1/2pi) int_0^T int_omega |u|^2 dx dt; "
    "A^2 norms use area measure dA";

// Bad input: out-of-range parameters, malformed data, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation itself failed: factorization breakdown, precision exhausted.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

// Three-way outcome used by every growth or convergence heuristic.
enum class Trend { Convergent, Divergent, Inconclusive };

const char* to_string(Trend t);

}  // namespace hh
