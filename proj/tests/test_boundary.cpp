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
#include <random>

#include "doctest.h"
#include "halfheat/boundary.hpp"
#include "oracles.hpp"

using hh::cplx;
using hh::kPi;

namespace {

const hh::ArcInterval kArc(0, kPi / 2);
const hh::AnnularSector kExt(hh::Side::Exterior, 1.0, kArc);

hh::BoundaryDensity tri() { return hh::BoundaryDensity::triangle(kPi / 8, kPi / 4); }

// Five-point Dirichlet solve on the (s, phi) rectangle, data on s = 0, by a
// discrete sine transform in phi and the exact recurrence in s per mode.
struct FdOracle {
  int n;  // intervals per side
  double T, t1, L, hs, hp;
  std::vector<cplx> d;  // discrete sine coefficients of the s = 0 data

  FdOracle(const hh::BoundaryDensity& g, double T_, double t1_, double L_, int n_)
      : n(n_), T(T_), t1(t1_), L(L_), hs(T_ / n_), hp(L_ / n_), d(n_ - 1) {
    std::vector<cplx> data(n - 1);
    for (int j = 1; j < n; ++j) {
      const double phi = t1 + j * hp;
      data[j - 1] = std::polar(1.0, phi) * g(phi);
    }
    for (int k = 1; k < n; ++k) {
      cplx s = 0;
      for (int j = 1; j < n; ++j) s += data[j - 1] * std::sin(kPi * k * j / n);
      d[k - 1] = s * (2.0 / n);
    }
  }

  cplx at(int i, int j) const {
    cplx s = 0;
    for (int k = 1; k < n; ++k) {
      const double lam = 4 / (hp * hp) * std::pow(std::sin(kPi * k / (2.0 * n)), 2);
      const double mu = std::acosh(1 + lam * hs * hs / 2);
      const double r = std::exp(-mu * i) * -std::expm1(-2 * mu * (n - i)) / -std::expm1(-2 * mu * n);
      s += d[k - 1] * r * std::sin(kPi * k * j / n);
    }
    return s;
  }
};

}  // namespace

TEST_CASE("round trip recovery of supported densities") {
  for (const auto& dens : hh::fixture_corpus(kArc)) {
    const hh::CircleFunction g = dens.coefficients(48);
    const hh::HardyFunction f0 = hh::riesz_project(g);
    hh::CircleFunction ext(48);
    for (int n = 1; n <= 48; ++n) ext.set(-n, -g[-n]);
    const hh::CircleFunction r = hh::recover_boundary_density(f0, ext);
    for (int n = -48; n <= 48; ++n) CHECK(std::abs(r[n] - g[n]) <= 1e-12);
    // Cauchy transform consistency inside the disk.
    const cplx z(0.3, 0.4);
    CHECK(std::abs(hh::cauchy_transform(r, z) - f0.evaluate(z)) <= 1e-12);
  }
  const hh::CircleFunction z = hh::recover_boundary_density(hh::HardyFunction({cplx(0), cplx(0)}), hh::CircleFunction(1));
  for (const auto& c : z.data()) CHECK(c == cplx(0));
  hh::CircleFunction bad(1);
  bad.set(1, 1.0);
  CHECK_THROWS_AS(hh::recover_boundary_density(hh::HardyFunction({cplx(1)}), bad), hh::ValidationError);
  CHECK_THROWS_AS(hh::recover_boundary_density(hh::HardyFunction({cplx(1)}), std::nullopt), hh::ValidationError);
}

TEST_CASE("kernel state support violation stays away from zero") {
  const hh::HardyFunction k = hh::hardy_kernel(0.5, 32);
  for (const hh::ArcInterval arc : {hh::ArcInterval(0, kPi / 2), hh::ArcInterval(-1, 1), hh::ArcInterval(0.5, 3.5)}) {
    hh::InversionOptions fine;
    fine.K = 256;
    const hh::InversionResult r = hh::regularized_inversion(k, arc);
    const hh::InversionResult rf = hh::regularized_inversion(k, arc, fine);
    CHECK(r.violation > fine.confinable);
    CHECK(r.confinement != hh::Verdict::Pass);
    // Bounded away from zero: the violation does not decay as exterior modes are added.
    CHECK(rf.violation == doctest::Approx(r.violation).epsilon(0.05));
  }
  const hh::InversionResult z = hh::regularized_inversion(hh::HardyFunction({cplx(0)}), kArc);
  CHECK(z.g.l2_norm() == 0.0);
}

TEST_CASE("instability of the projection under modulation") {
  const hh::BoundaryDensity chi = hh::BoundaryDensity::gaussian(kPi / 4, 0.15);
  const hh::InstabilityPoint p0 = hh::instability_demo(chi, 0);
  const hh::InstabilityPoint p8 = hh::instability_demo(chi, 8);
  const hh::InstabilityPoint p64 = hh::instability_demo(chi, 64);
  CHECK(p0.projected <= p0.full);
  CHECK(p8.full == doctest::Approx(p0.full).epsilon(1e-12));
  CHECK(p64.full == doctest::Approx(p0.full).epsilon(1e-12));
  CHECK(p64.projected / p8.projected <= 1e-3);
  double prev = INFINITY;
  for (int k : {0, 4, 8, 16, 32, 64}) {
    const double v = hh::instability_demo(chi, k).projected;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("condition checks on reference densities") {
  const hh::ConditionReport t = hh::sufficient_condition_check(tri(), kArc);
  CHECK(t.necessary == hh::Verdict::Pass);
  CHECK(t.sufficient == hh::Verdict::Pass);
  CHECK(t.endpoint_trend == hh::Trend::Convergent);
  hh::ConditionReport w;
  CHECK(hh::w12_00_classify(tri(), kArc, &w));

  const hh::ConditionReport ind = hh::sufficient_condition_check(hh::BoundaryDensity::indicator(kArc), kArc);
  CHECK(ind.endpoint_trend == hh::Trend::Divergent);
  CHECK(ind.sufficient == hh::Verdict::Fail);
  // Per-level growth of the endpoint integral is roughly constant.
  const auto& lv = ind.endpoint_levels;
  REQUIRE(lv.size() >= 6);
  for (size_t k = lv.size() - 4; k < lv.size(); ++k) CHECK(lv[k] == doctest::Approx(lv[k - 1]).epsilon(0.1));

  const hh::ConditionReport z = hh::sufficient_condition_check(hh::BoundaryDensity::zero(), kArc);
  CHECK(z.norm == 0.0);
  CHECK(z.sufficient == hh::Verdict::Pass);
  CHECK(hh::w12_00_classify(hh::BoundaryDensity::zero(), kArc, nullptr));

  hh::ConditionReport lk;
  CHECK_FALSE(hh::w12_00_classify(hh::BoundaryDensity::log_kernel(kArc), kArc, &lk));
  CHECK(lk.necessary == hh::Verdict::Pass);
  CHECK(std::find(lk.labels.begin(), lk.labels.end(), "X^{0+}_{1/2-}") != lk.labels.end());
}

TEST_CASE("exterior poisson extension") {
  hh::CircleFunction a(1);
  a.set(-1, 1.0);
  const auto G1 = hh::exterior_poisson(a);
  for (const cplx z : {cplx(2, 0), cplx(-1.5, 3), cplx(0.2, -1.1)}) CHECK(std::abs(G1(z) - 1.0) <= 1e-15);
  hh::CircleFunction b(1);
  b.set(1, 1.0);
  CHECK(std::abs(hh::exterior_poisson(b)(std::polar(2.0, kPi / 4)) - cplx(0, 0.25)) <= 1e-15);
  CHECK_THROWS_AS(G1(cplx(0.5, 0.5)), hh::ValidationError);

  // Radial limits at smooth points of the triangle.
  const auto Gt = hh::exterior_poisson(tri());
  for (double th : {0.5, 0.9, 1.2, 3.0}) {
    const cplx h = std::polar(1.0, th) * tri()(th);
    CHECK(std::abs(Gt(std::polar(1 + 1e-8, th)) - h) <= 1e-6);
  }
  // Series and density forms agree away from the circle.
  const hh::CircleFunction g = tri().coefficients(256);
  const auto Gs = hh::exterior_poisson(g);
  CHECK(std::abs(Gs(std::polar(1.5, 0.7)) - Gt(std::polar(1.5, 0.7))) <= 1e-10);
}

TEST_CASE("single sine mode dw norm") {
  const hh::RectangleHarmonic h{1.0, 0.0, kPi / 2, {cplx(1)}};
  const double exact = kPi / 8 / std::tanh(2.0);
  CHECK(hh::dw_norm_squared(h, 0, 1) == doctest::Approx(exact).epsilon(1e-8));
  CHECK(exact == doctest::Approx(0.4073525).epsilon(1e-7));
  // The one-mode field.
  for (double s : {0.1, 0.5, 0.9})
    for (double phi : {0.2, 1.0})
      CHECK(std::abs(h.value(s, phi) - std::sinh(2 * (1 - s)) / std::sinh(2.0) * std::sin(2 * phi)) <= 1e-15);
  // Two-dimensional quadrature of |d_w h|^2 as a cross-check.
  const double q = oracle::integrate([&](double s) {
    return oracle::integrate([&](double phi) { return std::norm(h.dw(s, phi)); }, 0, kPi / 2, 4, 20);
  }, 0, 1, 4, 20);
  CHECK(q == doctest::Approx(exact).epsilon(1e-12));
  const hh::RectangleHarmonic zero{1.0, 0.0, kPi / 2, {cplx(0), cplx(0)}};
  const hh::DzNormReport dz = hh::dz_norm_diagnostic(zero);
  for (double v : dz.norms) CHECK(v == 0.0);
  CHECK(dz.verdict == hh::Trend::Convergent);
}

TEST_CASE("rectangle harmonic extension matches a finite-difference solve") {
  const hh::RectangleHarmonic h = hh::rectangle_harmonic_extension(tri(), kExt, 256);
  const FdOracle fd(tri(), 1.0, 0.0, kPi / 2, 1024);
  double worst = 0;
  for (int i : {64, 128, 256, 512, 900})
    for (int j : {100, 300, 512, 700, 1000}) worst = std::max(worst, std::abs(h.value(i * fd.hs, j * fd.hp) - fd.at(i, j)));
  CHECK(worst <= 1e-5);
  CHECK_THROWS_AS(hh::rectangle_harmonic_extension(hh::BoundaryDensity::triangle(kPi / 2, 0.0), kExt), hh::ValidationError);
}

TEST_CASE("jacobian cancellation in z coordinates") {
  const hh::BoundaryDensity bump = hh::BoundaryDensity::smooth_bump(kPi / 4, 0.45 * kPi / 2);
  const hh::RectangleHarmonic h = hh::rectangle_harmonic_extension(bump, kExt, 64);
  auto u = [&](cplx z) { return h.value(std::log(std::abs(z)), std::arg(z)); };
  auto dz = [&](cplx z) {
    const double e = 1e-3;
    auto d = [&](cplx dir) {
      return (-u(z + 2.0 * e * dir) + 8.0 * u(z + e * dir) - 8.0 * u(z - e * dir) + u(z - 2.0 * e * dir)) / (12 * e);
    };
    return 0.5 * (d(1) - cplx(0, 1) * d(cplx(0, 1)));
  };
  const double delta = 0.25;
  const double z_norm = oracle::integrate([&](double r) {
    return r * oracle::integrate([&](double t) { return std::norm(dz(std::polar(r, t))); }, 0.05, kPi / 2 - 0.05, 8, 20);
  }, std::exp(delta), std::exp(0.9), 8, 20);
  auto hs = h;
  // Same sub-rectangle in w coordinates.
  const double w_norm = oracle::integrate([&](double s) {
    return oracle::integrate([&](double phi) { return std::norm(hs.dw(s, phi)); }, 0.05, kPi / 2 - 0.05, 8, 20);
  }, delta, 0.9, 8, 20);
  CHECK(z_norm == doctest::Approx(w_norm).epsilon(1e-8));
}

TEST_CASE("triangle representer: duality and holomorphy") {
  const hh::BergmanRepresenter psi = hh::bergman_representer(tri(), kExt);
  const auto res = psi.duality_residuals(tri().coefficients(64), 16);
  REQUIRE(res.size() == 17);
  for (double r : res) CHECK(r <= 1e-6);
  CHECK(psi.dbar_residual() <= 1e-8);
  // psi = -(1/pi)(1/z) d_w h(log z).
  const cplx z = std::polar(1.6, 0.7);
  CHECK(std::abs(psi(z) + psi.field().dw(std::log(1.6), 0.7) / (kPi * z)) <= 1e-14);
  CHECK_THROWS_AS(hh::bergman_representer(hh::BoundaryDensity::indicator(kArc), kExt), hh::ValidationError);
}

TEST_CASE("indicator: divergent dz sequence and growing pseudo-Carleson ratios") {
  const hh::BoundaryDensity ind = hh::BoundaryDensity::indicator(kArc);
  const hh::DzNormReport dz = hh::dz_norm_diagnostic(hh::rectangle_harmonic_extension(ind, kExt));
  CHECK(dz.verdict == hh::Trend::Divergent);
  for (size_t k = 1; k < dz.norms.size(); ++k) CHECK(dz.norms[k] > dz.norms[k - 1]);
  const hh::PseudoCarlesonReport pc = hh::pseudo_carleson_ratio(ind, kExt, hh::make_contours(kExt));
  for (size_t k = 1; k < pc.ratios.size(); ++k) CHECK(pc.ratios[k] > pc.ratios[k - 1]);
  CHECK(pc.growth.verdict == hh::GrowthVerdict::Diverging);

  const hh::PseudoCarlesonReport pt = hh::pseudo_carleson_ratio(tri(), kExt, hh::make_contours(kExt));
  CHECK(pt.growth.verdict == hh::GrowthVerdict::BoundedPlateau);
  const hh::PseudoCarlesonReport p0 = hh::pseudo_carleson_ratio(hh::BoundaryDensity::zero(), kExt, hh::make_contours(kExt));
  for (double r : p0.ratios) CHECK(r == 0.0);
}

TEST_CASE("contour placement") {
  const hh::ContourSet c = hh::make_contours(kExt);
  CHECK(c.valid());
  CHECK(c.eta0 == doctest::Approx(0.25));
  const double d1 = std::abs(c.zeta1p - c.zeta1);
  CHECK(d1 == doctest::Approx(c.eta0 * kPi / 6).epsilon(1e-12));
  CHECK(d1 >= c.eta0 * kPi / 8);
  CHECK(d1 <= c.eta0 * kPi / 4);
}

TEST_CASE("condition hierarchy on the corpus has no violations") {
  int total = 0;
  for (const auto& d : hh::fixture_corpus(kArc)) {
    const hh::HierarchyReport r = hh::condition_hierarchy(d, kExt);
    total += r.violations;
    // Half-Sobolev pass implies sufficient pass; sufficient pass implies the rest.
    const auto& lv = r.levels;
    REQUIRE(lv.size() == 4);
    for (size_t i = 0; i < lv.size(); ++i)
      for (size_t j = i + 1; j < lv.size(); ++j)
        CHECK_FALSE((lv[i].second == hh::Verdict::Pass && lv[j].second == hh::Verdict::Fail));
  }
  CHECK(total == 0);
}
