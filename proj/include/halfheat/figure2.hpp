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

#include <functional>
#include <string>
#include <vector>

#include "halfheat/common.hpp"

namespace hh {

// Boundary value of P+g at e^{i theta} for a real profile g that is smooth
// between the listed kink angles: (g + i Hg + mean)/2 with the conjugate
// function Hg evaluated by piecewise Gauss-Legendre quadrature.
cplx riesz_boundary_value(const std::function<double(double)>& g, const std::vector<double>& kinks,
                          double mean, double theta);

// -2 Li(z) + Li(e^{i theta0} z) + Li(e^{-i theta0} z).
cplx triangle_dilog_combination(double theta0, cplx z);

struct Figure2Data {
  double theta0 = 0.0;
  double c0 = 0.0;     // fitted constant
  double alpha = 0.0;  // fitted scale
  std::vector<double> x;
  std::vector<cplx> p_plus;       // quadrature boundary values
  std::vector<cplx> closed_form;  // c0 + alpha * dilog combination
  double sup_error = 0.0;
};

// Triangle of half-width theta0 centred at 0, sampled at x_j = -pi + 2 pi j / samples.
// c0 and alpha come from the modes 0 and 1 of a 2^coeff_k point trapezoid rule.
Figure2Data figure2(double theta0, int samples, int coeff_k = 20);

// Whitespace-separated table with header "x re im" (17 significant digits).
std::string figure2_table(const Figure2Data& d);

}  // namespace hh
