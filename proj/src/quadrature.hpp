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

#include <utility>
#include <vector>

namespace hh {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Cached per order; Newton iteration on P_n from Chebyshev guesses.
const QuadratureRule& gauss_legendre(int n);

// Rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

using Panel = std::pair<double, double>;

// Uniform panels of width <= hmax covering [a, b]; the first (last) panel is
// further split dyadically depth_a (depth_b) times toward a (b).
std::vector<Panel> graded_panels(double a, double b, double hmax, int depth_a, int depth_b);

// Composite rule with `order` nodes on every panel.
QuadratureRule composite_rule(const std::vector<Panel>& panels, int order);

// Sorted cut points of [a, b]: a, the cuts strictly inside, b.
std::vector<double> split_points(double a, double b, std::vector<double> cuts);

}  // namespace hh
