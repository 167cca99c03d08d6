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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "halfheat/sector.hpp"

namespace hh {

// Planar region: disk, annular sector, or a union of shapes.
class Shape {
 public:
  static Shape disk(cplx center, double radius);
  static Shape sector(const AnnularSector& s);
  static Shape unite(const Shape& a, const Shape& b);

  bool contains(cplx z) const;
  Shape scaled(double lambda) const;

 private:
  enum class Kind { Disk, Sector, Union };
  Kind kind_ = Kind::Disk;
  cplx center_{0.0};
  double radius_ = 1.0;
  double scale_ = 1.0;  // sectors: contains(z / scale)
  std::shared_ptr<const AnnularSector> sector_;
  std::shared_ptr<const Shape> a_, b_;
};

// Cell centres lo + h (i + 1/2, j + 1/2) for 0 <= i < nx, 0 <= j < ny.
struct Grid {
  cplx lo{0.0};
  double h = 0.0;
  int nx = 0, ny = 0;

  static Grid square(cplx lo, double side, int n);
  cplx point(int i, int j) const { return lo + cplx(h * (i + 0.5), h * (j + 0.5)); }
  size_t index(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
  size_t size() const { return static_cast<size_t>(nx) * ny; }
};

struct GridField {
  Grid grid;
  std::vector<cplx> values;

  // Writes <base>.bin (little-endian re, im doubles, row j major) and
  // <base>.json describing the layout.
  void export_binary(const std::string& base) const;
};

std::vector<uint8_t> rasterize(const Shape& s, const Grid& g);

// Euclidean distance from each cell centre to the nearest marked cell centre
// (exact, separable squared-distance transform); +inf when nothing is marked.
std::vector<double> distance_to(const std::vector<uint8_t>& mask, const Grid& g);

// phi(x) = psi(3x - 1) with psi(t) = f(t)/(f(t) + f(1 - t)), f(t) = e^{-1/t}.
double cutoff_profile(double x);
// Sampled sup |phi'|.
double cutoff_profile_slope();

struct CutoffSpec {
  double epsilon = 0.0;  // grid distance between the two difference sets
  double eta = 0.0;      // mollifier radius
  double C1 = 0.0;       // int |w| rho(w) dA for the unit mollifier
  double first_moment = 0.0;  // discrete counterpart of eta C1
  double phi_slope = 0.0;     // sup |phi'|
  bool vacuous = false;       // a difference set is empty
};

struct Cutoff {
  Grid grid;
  std::vector<double> chi;
  std::vector<double> d1, d2;  // distances to Omega1 \ Omega2 and Omega2 \ Omega1
  CutoffSpec spec;
  double grad_max = 0.0;        // central differences on interior cells
  double grad_bound = 0.0;      // 16 / (3 eps) sup |phi'|
  long plateau_cells = 0;       // cells in the two eps/16 neighbourhoods
  long plateau_violations = 0;  // chi != 0 (resp. 1) there
};

// Rejects overlapping difference sets (eps = 0). Empty difference sets give
// the constant 1/2 with vacuous plateau conditions.
Cutoff build_cutoff(const Shape& omega1, const Shape& omega2, const Grid& grid);

struct SplitOptions {
  double input_tol = 5e-2;  // max |dbar g| / max |g| on interior cells
  double margin = 0.1;      // interior cells are at least this far from the boundary
};

struct SplitResult {
  Grid grid;
  std::vector<uint8_t> in1, in2;
  std::vector<cplx> g, b1, b2, u;
  double additivity_ulps = 0.0;  // max |b1 + b2 - g| / ulp(max(|b1|, |b2|, |g|)) on Omega1 & Omega2
  double dbar_b1 = 0.0;          // max |dbar b1| on interior cells of Omega1
  double dbar_b2 = 0.0;
  double input_dbar = 0.0;
  double sup_b1 = 0.0;  // max |b1| on Omega1
  double norm_g = 0.0, norm_b1 = 0.0, norm_b2 = 0.0;
  double C_R = 0.0;  // eps max(||b1||, ||b2||) / ||g||

  std::string to_json() const;
};

// g holomorphic on Omega1 & Omega2 (sampled there only). b1 = chi g - u on
// Omega1, b2 = g - b1 on the intersection and u on Omega2 \ Omega1, with
// u = (g dbar chi) * 1/(pi z) by zero-padded FFT convolution.
SplitResult cauchy_split(const std::function<cplx(cplx)>& g, const Shape& omega1,
                         const Shape& omega2, const Cutoff& chi, const SplitOptions& opt = {});

struct FriedrichsResult {
  int N = 0;
  double theta = 0.0;
  int digits = 0;
};

// sup |int f^2 dA| / int |f|^2 dA over area-mean-zero polynomials of degree
// <= N. Disk and sectors only.
FriedrichsResult friedrichs_constant(const BergmanDomain& domain, int N);

struct ClosednessReport {
  double theta = 0.0;
  double margin = 0.0;     // 1 - theta
  int samples = 0;
  double min_slack = 0.0;  // min ||f + conj g||^2 - (1 - theta)(||f||^2 + ||g||^2), normalized
  int violations = 0;      // slack below -1e-10
};

ClosednessReport closedness_margin(const BergmanDomain& domain, int N, int samples = 100,
                                   unsigned seed = 20260101u);

// Mean-zero quadratic forms in the basis z^n - mu_n, n = 1..N, scaled to unit
// diagonal: M[m][n] = int conj(q_m) q_n / s_m s_n, B[m][n] = int q_m q_n / s_m s_n.
void friedrichs_forms(const BergmanDomain& domain, int N, Eigen::MatrixXcd& M, Eigen::MatrixXcd& B);

}  // namespace hh
