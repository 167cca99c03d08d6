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

#include <cmath>

#include "doctest.h"
#include "halfheat/sector.hpp"
#include "oracles.hpp"

using hh::cplx;
using hh::kPi;

namespace {

const double kLn2 = std::log(2.0);

hh::AnnularSector quarter_ring(hh::Side side) {
  return hh::AnnularSector(side, kLn2, hh::ArcInterval(0, kPi / 2));
}

// int z^m conj(z^n) dA over r in [r0, r1], theta in [t1, t2].
cplx polar_quadrature(int m, int n, double r0, double r1, double t1, double t2) {
  const cplx ang = oracle::integrate([&](double t) { return std::polar(1.0, (m - n) * t); }, t1, t2, 8, 40);
  const double rad = oracle::integrate([&](double r) { return std::pow(r, m + n + 1); }, r0, r1, 2, 32);
  return ang * rad;
}

}  // namespace

TEST_CASE("gram entries match 2-D quadrature on both quarter rings") {
  for (hh::Side side : {hh::Side::Exterior, hh::Side::Interior}) {
    const hh::AnnularSector s = quarter_ring(side);
    const Eigen::MatrixXcd G = hh::monomial_gram(hh::BergmanDomain::sector(s), 20);
    double worst_normalized = 0, worst_relative = 0;
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n) {
        const cplx q = polar_quadrature(m, n, s.r_min(), s.r_max(), 0, kPi / 2);
        const double scale = std::sqrt(G(m, m).real() * G(n, n).real());
        worst_normalized = std::max(worst_normalized, std::abs(G(m, n) - q) / scale);
        if (std::abs(q) >= 1e-4 * scale)
          worst_relative = std::max(worst_relative, std::abs(G(m, n) - q) / std::abs(q));
      }
    CHECK(worst_normalized <= 1e-10);
    CHECK(worst_relative <= 1e-10);
  }
}

TEST_CASE("gram spot values") {
  const Eigen::MatrixXcd E = hh::monomial_gram(hh::BergmanDomain::sector(quarter_ring(hh::Side::Exterior)), 2);
  const Eigen::MatrixXcd I = hh::monomial_gram(hh::BergmanDomain::sector(quarter_ring(hh::Side::Interior)), 2);
  CHECK(E(0, 0).real() == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
  CHECK(E(0, 0).real() == doctest::Approx(2.3561945).epsilon(1e-7));
  CHECK(std::abs(E(0, 0).imag()) <= 1e-15);
  CHECK(std::abs(E(0, 1) - cplx(7.0 / 3, -7.0 / 3)) <= 1e-13);
  CHECK(E(1, 0) == std::conj(E(0, 1)));
  CHECK(I(0, 0).real() == doctest::Approx(3 * kPi / 16).epsilon(1e-14));
  CHECK(I(0, 0).real() == doctest::Approx(0.5890486).epsilon(1e-7));
}

TEST_CASE("gram is Hermitian, separable and factorizable") {
  for (hh::Side side : {hh::Side::Exterior, hh::Side::Interior}) {
    const hh::AnnularSector s(side, 1.0, hh::ArcInterval(0.3, 2.1));
    const hh::BergmanDomain d = hh::BergmanDomain::sector(s);
    const hh::GramMatrix g = hh::bergman_gram(s, 12);
    for (int m = 0; m <= 12; ++m)
      for (int n = 0; n <= 12; ++n) {
        CHECK(g.entries(m, n) == std::conj(g.entries(n, m)));
        CHECK(g.entries(m, n) == d.radial(m + n) * d.angular(m - n));
      }
  }
  for (hh::Side side : {hh::Side::Exterior, hh::Side::Interior})
    for (int N : {12, 24, 48}) {
      const hh::GramMatrix g = hh::bergman_gram(quarter_ring(side), N);
      REQUIRE(g.factored);
      CHECK(std::isfinite(g.condition));
      CHECK(g.condition >= 1.0);
      const Eigen::MatrixXcd unit =
          g.scale.cwiseInverse().asDiagonal() * g.entries * g.scale.cwiseInverse().asDiagonal();
      CHECK((g.factor * g.factor.adjoint() - unit).norm() <= 1e-10 * (N + 1));
      CHECK(g.factor.isLowerTriangular());
    }
}

TEST_CASE("sector area and membership") {
  for (double T : {0.2, 1.0, 2.5}) {
    const hh::ArcInterval arc(0.4, 1.9);
    const hh::AnnularSector e(hh::Side::Exterior, T, arc), i(hh::Side::Interior, T, arc);
    CHECK(e.area() == doctest::Approx(arc.length() * std::expm1(2 * T) / 2).epsilon(1e-14));
    CHECK(i.area() == doctest::Approx(arc.length() * -std::expm1(-2 * T) / 2).epsilon(1e-14));
    const double qe = oracle::integrate([](double r) { return r; }, e.r_min(), e.r_max()) * arc.length();
    CHECK(e.area() == doctest::Approx(qe).epsilon(1e-13));
    CHECK(e.contains(std::polar(std::exp(T / 2), 1.0)));
    CHECK_FALSE(e.contains(std::polar(std::exp(T / 2), 2.5)));
    CHECK(i.contains(std::polar(std::exp(-T / 2), 1.0)));
    CHECK_FALSE(i.contains(std::polar(std::exp(T / 2), 1.0)));
  }
  CHECK_THROWS_AS(hh::AnnularSector(hh::Side::Exterior, 0.0, hh::ArcInterval(0, 1)), hh::ValidationError);
  CHECK_THROWS_AS(hh::ArcInterval(1.0, 1.0), hh::ValidationError);
  CHECK_THROWS_AS(hh::ArcInterval(0.0, 2 * kPi), hh::ValidationError);
}

TEST_CASE("friedrichs bilinear matrix") {
  const Eigen::MatrixXcd D = hh::friedrichs_bilinear(hh::BergmanDomain::unit_disk(), 12);
  CHECK(D(0, 0).real() == doctest::Approx(kPi).epsilon(1e-15));
  for (int m = 0; m <= 12; ++m)
    for (int n = 0; n <= 12; ++n)
      if (m || n) CHECK(D(m, n) == cplx(0));

  const hh::AnnularSector s = quarter_ring(hh::Side::Interior);
  const Eigen::MatrixXcd B = hh::friedrichs_bilinear(hh::BergmanDomain::sector(s), 12);
  CHECK((B - B.transpose()).norm() == 0.0);
  for (int m = 0; m <= 12; ++m)
    for (int n = 0; n <= 12; ++n) {
      // int z^{m+n} dA: same oracle as the Gram with the conjugate dropped.
      const cplx ang = oracle::integrate([&](double t) { return std::polar(1.0, (m + n) * t); }, 0, kPi / 2, 8, 40);
      const double rad = oracle::integrate([&](double r) { return std::pow(r, m + n + 1); }, 0.5, 1.0, 2, 32);
      CHECK(std::abs(B(m, n) - ang * rad) <= 1e-13);
    }
}

TEST_CASE("hardy kernel examples and reproducing identity") {
  const hh::HardyFunction k0 = hh::hardy_kernel(0, 5);
  CHECK(k0[0] == cplx(1));
  for (int n = 1; n <= 5; ++n) CHECK(k0[n] == cplx(0));

  hh::CircleFunction z2(2);
  z2.set(2, 1.0);
  CHECK(std::abs(hh::inner(z2, hh::hardy_kernel(0.5, 8).to_circle()) - 0.25) <= 1e-16);

  const cplx u = std::polar(0.8, kPi / 4);
  CHECK(std::abs(hh::hardy_kernel(u, 64)[2] - cplx(0, -0.64)) <= 1e-15);

  hh::HardyFunction p({cplx(1, 2), cplx(-0.5, 0.3), cplx(0.25, 0), cplx(0, -1)});
  const cplx w(0.3, -0.6);
  CHECK(std::abs(hh::inner(p.to_circle(), hh::hardy_kernel(w, 3).to_circle()) - p.evaluate(w)) <= 1e-15);
  CHECK_THROWS_AS(hh::hardy_kernel(cplx(1, 0), 3), hh::ValidationError);
}

TEST_CASE("exterior bergman kernel") {
  CHECK(hh::exterior_bergman_kernel(2.0, 2.0).real() == doctest::Approx(1 / (9 * kPi)).epsilon(1e-15));
  CHECK(hh::exterior_bergman_kernel(2.0, 2.0).real() == doctest::Approx(0.0353678).epsilon(1e-6));
  const cplx u(1.3, 0.8), z(-0.9, 1.7);
  CHECK(std::abs(hh::exterior_bergman_kernel(u, z) - std::conj(hh::exterior_bergman_kernel(z, u))) <= 1e-16);
  CHECK(std::abs(hh::exterior_bergman_kernel(cplx(1e6, 1e6), z)) <= 1e-12);
  CHECK_THROWS_AS(hh::exterior_bergman_kernel(0.5, 2.0), hh::ValidationError);
}

TEST_CASE("exterior kernel reproduces z^-k on a truncated annulus") {
  // On 1 < |z| < R the pairing gives u^{-k} (1 - R^{2-2k}).
  const double R = std::exp(1.5);
  const cplx u = std::polar(1.5, 0.4);
  for (int k = 2; k <= 5; ++k) {
    const int M = 256;
    auto ring = [&](double r) {
      cplx s = 0;
      for (int j = 0; j < M; ++j) {
        const cplx z = std::polar(r, 2 * kPi * j / M);
        s += std::pow(z, -k) * std::conj(hh::exterior_bergman_kernel(u, z));
      }
      return s * (2 * kPi / M) * r;
    };
    const cplx q = oracle::integrate(ring, 1.0, R, 8, 24);
    const cplx expect = std::pow(u, -k) * (1 - std::pow(R, 2.0 - 2 * k));
    CHECK(std::abs(q - expect) <= 1e-10 * std::abs(expect));
  }
}

TEST_CASE("annulus monomial norm") {
  CHECK(hh::annulus_monomial_norm(1.0, 0) == doctest::Approx(kPi * (std::exp(1.0) - 1)).epsilon(1e-14));
  for (int n : {0, 1, 3, 7}) {
    const double T = 0.8;
    const double q = 2 * kPi * oracle::integrate([&](double r) { return std::pow(r, 2 * n + 1); }, 1.0, std::exp(T / 2));
    CHECK(hh::annulus_monomial_norm(T, n) == doctest::Approx(q).epsilon(1e-13));
  }
  for (double T = 0.01; T <= 5; T *= 1.3)
    for (int n = 0; n <= 40; ++n)
      CHECK(T / 2 <= std::expm1(T * (n + 1)) / (2.0 * n + 2));
  CHECK(hh::annulus_monomial_norm(1e-9, 0) / 1e-9 == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("matrix csv") {
  Eigen::MatrixXcd M(1, 2);
  M << cplx(0.1, -2), cplx(3, 0);
  CHECK(hh::matrix_csv(M) == "m,n,re,im\n0,0,0.10000000000000001,-2\n0,1,3,0\n");
}
