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
#include "halfheat/hum.hpp"
#include "halfheat/observability.hpp"
#include "oracles.hpp"

using hh::cplx;
using hh::kPi;

namespace {

const hh::ArcInterval kArc(0, kPi / 2);

hh::CoefficientSource bump_source() { return hh::CoefficientSource::poly_bump(kPi / 4, 0.9 * kPi / 4, 4); }

// Real bump with both halves of its spectrum.
hh::CircleFunction real_bump(int N) {
  const hh::HardyFunction h = bump_source().to_hardy(N);
  hh::CircleFunction f(N);
  for (int n = 0; n <= N; ++n) {
    f.set(n, h[n]);
    if (n) f.set(-n, std::conj(h[n]));
  }
  return f;
}

double space_time_norm(const hh::ControlField& u) {
  // Piecewise constant in time: dt times the arc quadrature on each cell.
  double s = 0;
  for (int j = 0; j < u.steps(); ++j) {
    const double t = (j + 0.5) * u.dt();
    s += u.dt() * oracle::integrate([&](double x) { return std::norm(u.value(t, x)); },
                                    u.arc().theta1(), u.arc().theta2(), 8, 40);
  }
  return std::sqrt(s / (2 * kPi));
}

}  // namespace

TEST_CASE("gramian entries against time and arc quadrature") {
  const hh::ControlGramian g = hh::hum_gramian(1.0, kArc, hh::ControlSystem::H2, 4);
  CHECK(g.entries(0, 0).real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.entries(1, 1).real() == doctest::Approx(-std::expm1(-2.0) / 2 * 0.25).epsilon(1e-14));
  CHECK(g.entries(0, 1) == std::conj(g.entries(1, 0)));

  const hh::ControlGramian l = hh::hum_gramian(0.7, hh::ArcInterval(0.2, 1.9), hh::ControlSystem::L2, 16);
  REQUIRE(l.modes.size() == 33);
  double worst = 0;
  for (size_t i = 0; i < l.modes.size(); ++i)
    for (size_t k = 0; k < l.modes.size(); ++k) {
      const int a = l.modes[i], b = l.modes[k];
      const double time = oracle::integrate([&](double t) { return std::exp(-(0.7 - t) * (std::abs(a) + std::abs(b))); }, 0, 0.7, 4, 30);
      const cplx arc = oracle::integrate([&](double x) { return std::polar(1.0, (b - a) * x); }, 0.2, 1.9, 8, 40) / (2 * kPi);
      worst = std::max(worst, std::abs(l.entries(i, k) - time * arc));
      CHECK(l.entries(i, k) == std::conj(l.entries(k, i)));
    }
  CHECK(worst <= 1e-10);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(l.entries);
  CHECK(es.eigenvalues().minCoeff() >= -1e-14);
}

TEST_CASE("discrete gramian converges to the continuous one") {
  const hh::ControlGramian c = hh::hum_gramian(1.0, kArc, hh::ControlSystem::H2, 8);
  double prev = INFINITY;
  for (int steps : {16, 64, 256}) {
    const double d = (hh::hum_gramian_discrete(1.0, kArc, hh::ControlSystem::H2, 8, steps).entries - c.entries).norm();
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("zero state gives zero control") {
  const hh::Synthesis s = hh::synthesize_h2(hh::HardyFunction(std::vector<cplx>(9, cplx(0))), 1.0, kArc, 8, 1e-6);
  CHECK(s.report.residual == 0.0);
  CHECK(s.control.norm() == 0.0);
  CHECK(hh::mean_matching_check(s.control, hh::CircleFunction(8)) == 0.0);
}

TEST_CASE("simulate: free orbit and the mode-zero ODE") {
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  hh::CircleFunction f0(6);
  for (int n = -6; n <= 6; ++n) f0.set(n, cplx(nd(rng), nd(rng)));
  hh::ControlField u(1.3, kArc, hh::mode_range(hh::ControlSystem::L2, 6), 10);
  const auto traj = hh::simulate(f0, u, 40);
  CHECK(traj.size() == 41);
  const hh::CircleFunction free = hh::semigroup_apply(f0, 1.3);
  for (int n = -6; n <= 6; ++n) CHECK(std::abs(traj.back()[n] - free[n]) <= 1e-14);

  hh::ControlField c(2.0, kArc, {0}, 4);
  c.coefficients().setConstant(cplx(0.7, -0.2));
  hh::CircleFunction a(0);
  a.set(0, 1.5);
  const cplx final0 = hh::simulate(a, c, 4).back()[0];
  CHECK(std::abs(final0 - (1.5 + 2.0 * cplx(0.7, -0.2) * 0.25)) <= 1e-15);
  CHECK_THROWS_AS(hh::simulate(a, c, 6), hh::ValidationError);
}

TEST_CASE("bump synthesis: residual consistency, refinement and norm quadrature") {
  const hh::HardyFunction f0 = bump_source().to_hardy(32);
  const hh::Synthesis s = hh::synthesize_h2(f0, 1.0, kArc, 32, 1e-8);
  CHECK(s.report.residual <= 1e-3);
  const hh::CircleFunction fT = hh::simulate(f0.to_circle(), s.control, 512).back();
  CHECK(std::abs(fT.l2_norm() / f0.l2_norm() - s.report.residual) <= 1e-10);
  const hh::CircleFunction fine = hh::simulate(f0.to_circle(), s.control, 1024).back();
  CHECK(std::abs(fine.l2_norm() / f0.l2_norm() - s.report.residual) <= 1e-6);
  CHECK(std::abs(space_time_norm(s.control) - s.control.norm()) <= 1e-8);
  CHECK(std::abs(s.control.norm() - s.report.control_norm) <= 1e-15);
}

TEST_CASE("control norm tracks the observability constant") {
  // ||u|| <= e^T C_N with a factor 3 of slack for the regularized solve.
  const hh::Synthesis s = hh::synthesize_h2(bump_source().to_hardy(32), 1.0, kArc, 32, 1e-10);
  const double C = hh::observability_constant(bump_source(), hh::AnnularSector(hh::Side::Exterior, 1.0, kArc), 32).value;
  CHECK(s.report.control_norm <= 3 * std::exp(1.0) * C);
}

TEST_CASE("L2 synthesis: mean matching and frequency split") {
  const hh::CircleFunction f0 = real_bump(32);
  for (double eps : {1e-6, 1e-8, 1e-10}) {
    const hh::Synthesis s = hh::synthesize_l2(f0, 1.0, kArc, 32, eps);
    CHECK(hh::mean_matching_check(s.control, f0) <= 1e-8);
    CHECK(s.report.mean_residual == hh::mean_matching_check(s.control, f0));
    if (eps == 1e-10) {
      CHECK(s.report.residual <= 1e-3);
      const double plus = hh::riesz_project(s.final_state).l2_norm();
      const double minus = hh::riesz_project(s.final_state.conj()).l2_norm();
      CHECK(plus <= 1e-3 * f0.l2_norm());
      CHECK(minus <= 1e-3 * f0.l2_norm());
    }
  }
  hh::CircleFunction only0(0);
  only0.set(0, 0.8);
  const hh::Synthesis s0 = hh::synthesize_l2(only0, 1.0, kArc, 0, 1e-8);
  CHECK(hh::mean_matching_check(s0.control, only0) <= 1e-12);
  CHECK(s0.report.residual <= 1e-12);
}

TEST_CASE("H2 syntheses of the two halves match means for a real mean") {
  const hh::CircleFunction f0 = real_bump(24);
  const hh::Synthesis a = hh::synthesize_h2(hh::riesz_project(f0), 1.0, kArc, 24, 1e-8);
  const hh::Synthesis b = hh::synthesize_h2(hh::riesz_project(f0.conj()), 1.0, kArc, 24, 1e-8);
  CHECK(std::abs(a.control.mean() + f0[0]) <= 1e-8);
  CHECK(std::abs(b.control.mean() + std::conj(f0[0])) <= 1e-8);
  CHECK(std::abs(a.control.mean() - b.control.mean()) <= 1e-8);
}

TEST_CASE("synthesized control is minimal against kernel perturbations") {
  for (hh::ControlSystem sys : {hh::ControlSystem::H2, hh::ControlSystem::L2}) {
    const hh::CircleFunction f0 = sys == hh::ControlSystem::H2 ? bump_source().to_hardy(32).to_circle() : real_bump(32);
    const hh::Synthesis s = sys == hh::ControlSystem::H2 ? hh::synthesize_h2(hh::riesz_project(f0), 1.0, kArc, 32, 1e-8)
                                                         : hh::synthesize_l2(f0, 1.0, kArc, 32, 1e-8);
    CHECK(hh::minimality_defect(s.control, 50, 20260101u) <= 1e-10);
    // Perturbations have no terminal effect.
    const hh::ControlField w = hh::kernel_perturbation(s.control, 99u, 1.0);
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hh::simulate(hh::CircleFunction(32), w, 512).back().l2_norm() <= 1e-10);
  }
}

TEST_CASE("sweep trades residual for norm") {
  const auto reps = hh::epsilon_sweep(hh::ControlSystem::H2, bump_source().to_hardy(32).to_circle(), 1.0, kArc, 32,
                                      {1e-2, 1e-4, 1e-6, 1e-8});
  for (size_t k = 1; k < reps.size(); ++k) {
    CHECK(reps[k].residual <= reps[k - 1].residual);
    CHECK(reps[k].control_norm >= reps[k - 1].control_norm);
  }
}

TEST_CASE("control field csv and mean") {
  hh::ControlField u(1.0, kArc, {0, 1}, 2);
  u.coefficients() << cplx(1, 0), cplx(0, 1), cplx(2, 0), cplx(0, 0);
  CHECK(u.to_csv() == "t,mode,re,im\n0,0,1,0\n0,1,0,1\n0.5,0,2,0\n0.5,1,0,0\n");
  const cplx direct = oracle::integrate([&](double t) {
    return oracle::integrate([&](double x) { return u.value(t, x); }, 0, kPi / 2, 4, 20);
  }, 0, 1, 2, 20) / (2 * kPi);
  CHECK(std::abs(u.mean() - direct) <= 1e-8);
}

TEST_CASE("zero-mean decomposition") {
  const double T = 1.0;
  std::mt19937 rng(17);
  std::normal_distribution<double> nd;
  cplx c[4][4];
  for (auto& row : c)
    for (auto& v : row) v = cplx(nd(rng), nd(rng));
  auto raw = [&](double t, double x) {
    cplx s = 0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) s += c[j][k] * std::pow(t, j) * std::polar(1.0, (k - 1) * x);
    return s;
  };
  const cplx mean = oracle::integrate([&](double t) {
    return oracle::integrate([&](double x) { return raw(t, x); }, 0, kPi / 2, 4, 20);
  }, 0, T, 2, 20) / (T * kPi / 2);
  auto v = [&](double t, double x) { return raw(t, x) - mean; };

  double prev = INFINITY;
  for (int N : {8, 16, 32}) {
    const hh::ZeroMeanDecomposition d = hh::decompose_zero_mean(v, T, kArc, N);
    CHECK(d.residual * 2 <= prev);
    prev = d.residual;
    // The components reproduce v up to the residual at a sample point.
    if (N == 32) {
      const double t = 0.37, x = 0.81;
      CHECK(std::abs(d.v1(t, x) + d.v2(t, x) - v(t, x)) <= 1e-2 * std::abs(v(t, x)) + 1e-3);
    }
  }
  const hh::ZeroMeanDecomposition z = hh::decompose_zero_mean([](double, double) { return cplx(0); }, T, kArc, 8);
  CHECK(z.residual == 0.0);
  CHECK(z.v1(0.5, 0.5) == cplx(0));
  CHECK_THROWS_AS(hh::decompose_zero_mean([](double, double) { return cplx(1); }, T, kArc, 8), hh::ValidationError);
}
