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

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "halfheat/spectral.hpp"

namespace hh {

enum class Side { Exterior, Interior };

const char* to_string(Side s);

// Exterior: 1 < |z| < e^T over the arc. Interior: e^{-T} < |z| < 1.
class AnnularSector {
 public:
  AnnularSector(Side side, double T, ArcInterval arc);

  Side side() const { return side_; }
  double T() const { return T_; }
  const ArcInterval& arc() const { return arc_; }
  double r_min() const;
  double r_max() const;
  double area() const;
  bool contains(cplx z) const;

  // int r^{s+1} dr over the radial range.
  double radial(int s) const;

 private:
  Side side_;
  double T_;
  ArcInterval arc_;
};

// Domains on which monomial Gram and square-bilinear matrices separate into
// radial and angular factors.
class BergmanDomain {
 public:
  enum class Kind { Disk, Sector, Annulus };

  static BergmanDomain unit_disk();
  static BergmanDomain sector(const AnnularSector& s);
  static BergmanDomain annulus(double r_inner, double r_outer);

  Kind kind() const { return kind_; }
  const AnnularSector& sector() const;
  double r_inner() const { return r0_; }
  double r_outer() const { return r1_; }
  // int r^{s+1} dr.
  double radial(int s) const;
  // int e^{i d theta} d theta over the angular range.
  cplx angular(int d) const;
  double area() const { return radial(0) * angular(0).real(); }

 private:
  Kind kind_ = Kind::Disk;
  double r0_ = 0.0, r1_ = 1.0;
  std::optional<AnnularSector> sector_;
};

struct GramMatrix {
  int order = 0;
  Eigen::MatrixXcd entries;  // <z^m, z^n>_{A^2}
  Eigen::VectorXd scale;     // sqrt of the diagonal
  Eigen::MatrixXcd factor;   // lower Cholesky factor of the unit-diagonal Gram, rounded from extended precision
  bool factored = false;
  double condition = 0.0;  // (max/min factor diagonal)^2, +inf when not factored
};

GramMatrix bergman_gram(const AnnularSector& sector, int N);

// G[m][n] = radial(m+n) angular(m-n).
Eigen::MatrixXcd monomial_gram(const BergmanDomain& domain, int N);
// B[m][n] = int z^m z^n dA = radial(m+n) angular(m+n).
Eigen::MatrixXcd friedrichs_bilinear(const BergmanDomain& domain, int N);

// Coefficients conj(u)^n, 0 <= n <= N.
HardyFunction hardy_kernel(cplx u, int N);

// 1 / (pi (1 - conj(u) z)^2) for |u|, |z| > 1.
cplx exterior_bergman_kernel(cplx u, cplx z);

// 2 pi (e^{T(n+1)} - 1) / (2n + 2).
double annulus_monomial_norm(double T, int n);

// Long format "m,n,re,im" with 17 significant digits.
std::string matrix_csv(const Eigen::MatrixXcd& M);

}  // namespace hh
