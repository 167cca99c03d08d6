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

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "halfheat/common.hpp"

namespace hh {

namespace {

QuadratureRule build(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(build(n));
  return *slot;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule r = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

}  // namespace hh

namespace hh {

std::vector<Panel> graded_panels(double a, double b, double hmax, int depth_a, int depth_b) {
  std::vector<Panel> out;
  if (!(b > a)) return out;
  const int m = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
  const double h = (b - a) / m;
  for (int i = 0; i < m; ++i) {
    double lo = a + i * h, hi = i + 1 == m ? b : a + (i + 1) * h;
    const int da = i == 0 ? depth_a : 0;
    const int db = i + 1 == m ? depth_b : 0;
    if (da == 0 && db == 0) {
      out.emplace_back(lo, hi);
      continue;
    }
    // Split at the midpoint when both ends are graded.
    double mid = da > 0 && db > 0 ? 0.5 * (lo + hi) : (da > 0 ? hi : lo);
    if (da > 0) {
      std::vector<Panel> left;
      double edge = mid;
      for (int k = 0; k < da; ++k) {
        const double next = lo + 0.5 * (edge - lo);
        left.emplace_back(next, edge);
        edge = next;
      }
      left.emplace_back(lo, edge);
      out.insert(out.end(), left.rbegin(), left.rend());
    }
    if (db > 0) {
      double edge = mid;
      for (int k = 0; k < db; ++k) {
        const double next = edge + 0.5 * (hi - edge);
        out.emplace_back(edge, next);
        edge = next;
      }
      out.emplace_back(edge, hi);
    }
  }
  return out;
}

QuadratureRule composite_rule(const std::vector<Panel>& panels, int order) {
  const QuadratureRule& ref = gauss_legendre(order);
  QuadratureRule r;
  r.nodes.reserve(panels.size() * order);
  r.weights.reserve(panels.size() * order);
  for (const auto& [lo, hi] : panels) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (int i = 0; i < order; ++i) {
      r.nodes.push_back(c + h * ref.nodes[i]);
      r.weights.push_back(h * ref.weights[i]);
    }
  }
  return r;
}

std::vector<double> split_points(double a, double b, std::vector<double> cuts) {
  std::vector<double> out{a};
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c > a && c < b && c > out.back()) out.push_back(c);
  out.push_back(b);
  return out;
}

}  // namespace hh
