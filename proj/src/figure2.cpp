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

#include "halfheat/figure2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "halfheat/spectral.hpp"
#include "quadrature.hpp"

namespace hh {

cplx riesz_boundary_value(const std::function<double(double)>& g, const std::vector<double>& kinks,
                          double mean, double theta) {
  // Hg(theta) = (1/2pi) int_0^pi (g(theta-s) - g(theta+s)) cot(s/2) ds.
  std::vector<double> cuts = {0.0, kPi};
  for (double k : kinks) {
    for (double s : {theta - k, k - theta}) {
      s = std::fmod(s, kTwoPi);
      if (s < 0) s += kTwoPi;
      if (s > 0 && s < kPi) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const auto& rule = gauss_legendre(40);
  double h = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a < 1e-15) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + half * rule.nodes[q];
      h += rule.weights[q] * half * (g(theta - s) - g(theta + s)) / std::tan(0.5 * s);
    }
  }
  h /= kTwoPi;
  return 0.5 * cplx(g(theta) + mean, h);
}

cplx triangle_dilog_combination(double theta0, cplx z) {
  return -2.0 * dilog(z) + dilog(std::polar(1.0, theta0) * z) + dilog(std::polar(1.0, -theta0) * z);
}

Figure2Data figure2(double theta0, int samples, int coeff_k) {
  require(theta0 > 0 && theta0 < kPi, "figure2: theta0 must lie in (0, pi)");
  require(samples >= 1, "figure2: samples must be positive");
  Figure2Data d;
  d.theta0 = theta0;
  auto profile = [theta0](double t) { return triangle_profile(theta0, 0.0, t); };
  const CircleFunction q =
      coefficients_trapezoid([&](double t) { return cplx(profile(t), 0.0); }, 1, coeff_k);
  d.c0 = q[0].real();
  d.alpha = q[1].real() / (2.0 * std::cos(theta0) - 2.0);
  const std::vector<double> kinks = {-theta0, 0.0, theta0};
  for (int j = 0; j < samples; ++j) {
    const double x = -kPi + kTwoPi * j / samples;
    const cplx p = riesz_boundary_value(profile, kinks, d.c0, x);
    const cplx c = d.c0 + d.alpha * triangle_dilog_combination(theta0, std::polar(1.0, x));
    d.x.push_back(x);
    d.p_plus.push_back(p);
    d.closed_form.push_back(c);
    d.sup_error = std::max(d.sup_error, std::abs(p - c));
  }
  return d;
}

std::string figure2_table(const Figure2Data& d) {
  std::string out = "x re im\n";
  char buf[128];
  for (size_t j = 0; j < d.x.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", d.x[j], d.p_plus[j].real(),
                  d.p_plus[j].imag());
    out += buf;
  }
  return out;
}

}  // namespace hh
