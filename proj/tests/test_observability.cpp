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
#include <fstream>
#include <random>

#include "doctest.h"
#include "halfheat/observability.hpp"
#include "json.hpp"
#include "oracles.hpp"

using hh::cplx;
using hh::kPi;

namespace {

hh::AnnularSector exterior(double T) { return hh::AnnularSector(hh::Side::Exterior, T, hh::ArcInterval(0, kPi / 2)); }

nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(HH_SOURCE_DIR) + "/fixtures/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("constant state at order zero") {
  const hh::HardyFunction one({cplx(1)});
  const double c = hh::observability_constant(one, exterior(std::log(2.0)), 0);
  // One-dimensional sup: |<1, a>| / (|a| ||1||).
  CHECK(c == doctest::Approx(1 / std::sqrt(3 * kPi / 4)).epsilon(1e-13));
  CHECK(c == doctest::Approx(0.651470).epsilon(1e-6));
}

TEST_CASE("zero state gives zero") {
  CHECK(hh::observability_constant(hh::HardyFunction({cplx(0), cplx(0)}), exterior(1), 8) == 0.0);
  const hh::AnnularSector in(hh::Side::Interior, 1.0, hh::ArcInterval(0, kPi / 2));
  CHECK(hh::reachability_constant(hh::HardyFunction({cplx(0)}), in, 8) == 0.0);
}

TEST_CASE("constant dominates random Rayleigh quotients") {
  // Independent Gram by polar quadrature; exterior ring T = 0.5 keeps it well conditioned.
  const int N = 6;
  const hh::AnnularSector s(hh::Side::Exterior, 0.5, hh::ArcInterval(0, kPi / 2));
  Eigen::MatrixXcd G(N + 1, N + 1);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      const cplx a = oracle::integrate([&](double t) { return std::polar(1.0, (m - n) * t); }, 0, kPi / 2, 4, 30);
      const double r = oracle::integrate([&](double x) { return std::pow(x, m + n + 1); }, 1, std::exp(0.5), 1, 20);
      G(m, n) = a * r;
    }
  const hh::CoefficientSource tri = hh::CoefficientSource::triangle(kPi / 8, kPi / 4);
  const hh::HardyFunction f = tri.to_hardy(N);
  const double C = hh::observability_constant(tri, s, N).value;
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  double best = 0;
  for (int k = 0; k < 5000; ++k) {
    Eigen::VectorXcd c(N + 1);
    for (int n = 0; n <= N; ++n) c(n) = cplx(nd(rng), nd(rng));
    cplx pair = 0;
    for (int n = 0; n <= N; ++n) pair += f[n] * std::conj(c(n));
    const double q = std::abs(pair) / std::sqrt((c.transpose() * G * c.conjugate())(0, 0).real());
    CHECK(q <= C * (1 + 1e-10));
    best = std::max(best, q);
  }
  CHECK(best >= 0.25 * C);
  // The maximizer conj(G^{-1} conj(a)) attains it.
  Eigen::VectorXcd a(N + 1);
  for (int n = 0; n <= N; ++n) a(n) = f[n];
  const Eigen::VectorXcd c = G.ldlt().solve(a.conjugate()).conjugate();
  cplx pair = 0;
  for (int n = 0; n <= N; ++n) pair += f[n] * std::conj(c(n));
  CHECK(std::abs(pair) / std::sqrt((c.transpose() * G * c.conjugate())(0, 0).real()) ==
        doctest::Approx(C).epsilon(1e-8));
}

TEST_CASE("monotone in N, homogeneous, monotone in T") {
  const hh::CoefficientSource tri = hh::CoefficientSource::triangle(kPi / 8, kPi / 4);
  double prev = 0;
  for (int N : {2, 4, 8, 16, 24}) {
    const double c = hh::observability_constant(tri, exterior(1), N).value;
    CHECK(c >= prev * (1 - 1e-12));
    prev = c;
  }
  const cplx lambda(-2.5, 1.5);
  for (int N : {4, 12}) {
    const double c = hh::observability_constant(tri, exterior(1), N).value;
    CHECK(hh::observability_constant(tri.scaled(lambda), exterior(1), N).value ==
          doctest::Approx(std::abs(lambda) * c).epsilon(1e-12));
    const hh::HardyFunction f = tri.to_hardy(N);
    std::vector<cplx> scaled(f.data());
    for (auto& v : scaled) v *= lambda;
    CHECK(hh::observability_constant(hh::HardyFunction(scaled), exterior(1), N) ==
          doctest::Approx(std::abs(lambda) * hh::observability_constant(f, exterior(1), N)).epsilon(1e-10));
  }
  const hh::CoefficientSource k = hh::CoefficientSource::kernel(0.5);
  for (int N : {4, 16}) {
    double last = INFINITY;
    for (double T : {0.25, 0.5, 1.0, 2.0}) {
      const double c = hh::observability_constant(k, exterior(T), N).value;
      CHECK(c <= last * (1 + 1e-12));
      last = c;
    }
  }
}

TEST_CASE("classify growth rule examples") {
  using hh::GrowthVerdict;
  CHECK(hh::classify_growth({1.0, 1.01, 1.015, 1.016}).verdict == GrowthVerdict::BoundedPlateau);
  CHECK(hh::classify_growth({1, 4, 16, 64}).verdict == GrowthVerdict::Diverging);
  CHECK(hh::classify_growth({1, 1.5, 2.1, 2.9}).verdict == GrowthVerdict::Inconclusive);
  CHECK_THROWS_AS(hh::classify_growth({1, 2}), hh::ValidationError);
  const auto g = hh::classify_growth({1, 4, 9}, {8, 16, 48});
  REQUIRE(g.ratios.size() == 2);
  CHECK(g.ratios[0] == doctest::Approx(4));
  CHECK(g.ratios[1] == doctest::Approx(std::pow(2.25, 1 / std::log2(3.0))));
  CHECK(std::string(hh::to_string(GrowthVerdict::BoundedPlateau)) == "bounded-plateau");
}

TEST_CASE("reach probes flip across the interior sector") {
  const nlohmann::json fx = load_fixture("growth.json")["values"];
  const hh::GrowthThresholds th{fx["thresholds"]["plateau"].get<double>(),
                                fx["thresholds"]["diverging"].get<double>()};
  const hh::AnnularSector in(hh::Side::Interior, 1.0, hh::ArcInterval(0, kPi / 2));
  REQUIRE(fx["reach_probes"].size() == 4);
  int inside = 0;
  for (const auto& p : fx["reach_probes"]) {
    const cplx u(p["u"][0].get<double>(), p["u"][1].get<double>());
    CHECK(in.contains(u) == p["inside"].get<bool>());
    inside += in.contains(u);
    const auto rep = hh::observability_report(hh::CoefficientSource::kernel(u), in, {8, 16, 32, 48}, th);
    CHECK(rep.growth.verdict == (in.contains(u) ? hh::GrowthVerdict::BoundedPlateau : hh::GrowthVerdict::Diverging));
    for (size_t k = 0; k < rep.constants.size(); ++k)
      CHECK(rep.constants[k] == doctest::Approx(p["constants"][k].get<double>()).epsilon(1e-6));
  }
  CHECK(inside == 2);
}

TEST_CASE("report json carries the convention") {
  const auto rep = hh::observability_report(hh::CoefficientSource::triangle(kPi / 8, kPi / 4), exterior(1), {4, 8, 16});
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["convention"] == hh::kConvention);
  CHECK(j["orders"].size() == 3);
}

TEST_CASE("cost sweep with a single horizon has no fit") {
  const hh::HardyFunction f = hh::CoefficientSource::poly_bump(kPi / 4, 0.9 * kPi / 4, 4).to_hardy(16);
  hh::CostSweepOptions opt;
  opt.N = 16;
  opt.steps = 128;
  const hh::CostSweep cs = hh::cost_vs_time_sweep(f, {1.0}, hh::ArcInterval(0, kPi / 2), opt);
  CHECK(cs.rows.size() == 1);
  CHECK_FALSE(cs.has_slope);
  CHECK(cs.rows[0].ok);
  CHECK(cs.rows[0].residual <= 1e-3 * (1 + 1e-9));
}
