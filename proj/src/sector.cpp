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

#include "halfheat/sector.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "sector_mp.hpp"

namespace hh {

const char* to_string(Side s) { return s == Side::Exterior ? "exterior" : "interior"; }

AnnularSector::AnnularSector(Side side, double T, ArcInterval arc)
    : side_(side), T_(T), arc_(arc) {
  require(std::isfinite(T) && T > 0, "sector horizon T must be positive");
}

double AnnularSector::r_min() const { return side_ == Side::Exterior ? 1.0 : std::exp(-T_); }
double AnnularSector::r_max() const { return side_ == Side::Exterior ? std::exp(T_) : 1.0; }

double AnnularSector::area() const { return arc_.length() * radial(0); }

bool AnnularSector::contains(cplx z) const {
  const double r = std::abs(z);
  return r > r_min() && r < r_max() && arc_.contains(std::arg(z));
}

double AnnularSector::radial(int s) const {
  require(s > -2, "radial moment needs s > -2");
  const double k = s + 2.0;
  if (side_ == Side::Exterior) return std::expm1(T_ * k) / k;
  return -std::expm1(-T_ * k) / k;
}

BergmanDomain BergmanDomain::unit_disk() { return BergmanDomain(); }

BergmanDomain BergmanDomain::sector(const AnnularSector& s) {
  BergmanDomain d;
  d.kind_ = Kind::Sector;
  d.r0_ = s.r_min();
  d.r1_ = s.r_max();
  d.sector_ = s;
  return d;
}

BergmanDomain BergmanDomain::annulus(double r_inner, double r_outer) {
  require(r_inner > 0 && r_outer > r_inner, "annulus radii must satisfy 0 < r0 < r1");
  BergmanDomain d;
  d.kind_ = Kind::Annulus;
  d.r0_ = r_inner;
  d.r1_ = r_outer;
  return d;
}

const AnnularSector& BergmanDomain::sector() const {
  require(sector_.has_value(), "domain is not a sector");
  return *sector_;
}

double BergmanDomain::radial(int s) const {
  if (kind_ == Kind::Sector) return sector_->radial(s);
  const double k = s + 2.0;
  return (std::pow(r1_, k) - std::pow(r0_, k)) / k;
}

cplx BergmanDomain::angular(int d) const {
  if (kind_ == Kind::Sector) return sector_->arc().integral_exp(d);
  return d == 0 ? cplx(kTwoPi, 0.0) : cplx(0.0);
}

Eigen::MatrixXcd monomial_gram(const BergmanDomain& domain, int N) {
  require(N >= 0, "order N must be nonnegative");
  Eigen::MatrixXcd G(N + 1, N + 1);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) G(m, n) = domain.radial(m + n) * domain.angular(m - n);
  return G;
}

Eigen::MatrixXcd friedrichs_bilinear(const BergmanDomain& domain, int N) {
  require(N >= 0, "order N must be nonnegative");
  Eigen::MatrixXcd B(N + 1, N + 1);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) B(m, n) = domain.radial(m + n) * domain.angular(m + n);
  return B;
}

namespace {

// Unit-diagonal Cholesky in R digits; the factor is rounded to double.
template <class R>
bool factor_unit_gram(const BergmanDomain& dom, int N, GramMatrix& g) {
  mp::Dense<mp::cx<R>> G = mp::gram(mp::DomainFactors<R>(dom, N));
  mp::unit_diagonal(G);
  if (!mp::cholesky(G)) return false;
  g.factor = Eigen::MatrixXcd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= i; ++j) g.factor(i, j) = G(i, j).to_double();
  g.condition = mp::condition_estimate(G);
  return true;
}

}  // namespace

GramMatrix bergman_gram(const AnnularSector& sector, int N) {
  require(N >= 0, "order N must be nonnegative");
  const BergmanDomain dom = BergmanDomain::sector(sector);
  GramMatrix g;
  g.order = N;
  g.entries = monomial_gram(dom, N);
  g.scale = g.entries.diagonal().real().cwiseSqrt();
  // Double-precision Cholesky of the rescaled Gram breaks down near N = 15.
  g.factored = factor_unit_gram<mp::R100>(dom, N, g) || factor_unit_gram<mp::R200>(dom, N, g);
  if (!g.factored) {
    g.factor.resize(0, 0);
    g.condition = std::numeric_limits<double>::infinity();
  }
  return g;
}

HardyFunction hardy_kernel(cplx u, int N) {
  require(std::abs(u) < 1.0, "hardy_kernel: |u| must be < 1");
  require(N >= 0, "order N must be nonnegative");
  std::vector<cplx> c(N + 1);
  cplx p(1.0);
  for (int n = 0; n <= N; ++n) {
    c[n] = p;
    p *= std::conj(u);
  }
  return HardyFunction(std::move(c));
}

cplx exterior_bergman_kernel(cplx u, cplx z) {
  require(std::abs(u) > 1.0 && std::abs(z) > 1.0, "exterior kernel needs |u| > 1 and |z| > 1");
  const cplx d = 1.0 - std::conj(u) * z;
  return 1.0 / (kPi * d * d);
}

double annulus_monomial_norm(double T, int n) {
  require(T > 0, "annulus_monomial_norm: T must be positive");
  require(n >= 0, "annulus_monomial_norm: n must be nonnegative");
  return kTwoPi * std::expm1(T * (n + 1)) / (2.0 * n + 2.0);
}

std::string matrix_csv(const Eigen::MatrixXcd& M) {
  std::string out = "m,n,re,im\n";
  char buf[160];
  for (int m = 0; m < M.rows(); ++m)
    for (int n = 0; n < M.cols(); ++n) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", m, n, M(m, n).real(), M(m, n).imag());
      out += buf;
    }
  return out;
}

}  // namespace hh
