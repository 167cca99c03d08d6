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

#include <string>
#include <vector>

#include "halfheat/sector.hpp"

namespace hh {

// Taylor coefficients of a state, reproducible at any precision. Rounding
// closed-form coefficients to double before the Gram solve destroys the
// high-order constants, so closed forms are evaluated directly in extended
// precision.
class CoefficientSource {
 public:
  enum class Kind { Triangle, Kernel, PolyBump, List };

  // Riesz projection of the triangle of half-width theta0 centred at center.
  static CoefficientSource triangle(double theta0, double center);
  // Hardy reproducing kernel k_u, coefficients conj(u)^n.
  static CoefficientSource kernel(cplx u);
  // Riesz projection of (1 - ((t - center)/halfwidth)^2)^power on
  // |t - center| < halfwidth.
  static CoefficientSource poly_bump(double center, double halfwidth, int power);
  // Stored coefficients taken as exact binary values.
  static CoefficientSource list(const HardyFunction& f);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  int power() const { return power_; }
  cplx u() const { return u_; }
  const HardyFunction& stored() const { return list_; }

  // Coefficients 0..N rounded to double.
  HardyFunction to_hardy(int N) const;
  // The same state scaled by a complex factor.
  CoefficientSource scaled(cplx s) const;
  cplx scale() const { return scale_; }

 private:
  Kind kind_ = Kind::List;
  std::string name_;
  double p1_ = 0.0, p2_ = 0.0;
  int power_ = 0;
  cplx u_{0.0};
  cplx scale_{1.0};
  HardyFunction list_;
};

struct RayleighResult {
  double value = 0.0;      // sup |<f,p>| / ||p||
  double condition = 0.0;  // estimate for the unit-diagonal Gram
  int digits = 0;          // working precision used
};

// sup over polynomials p of degree <= N of |<f, p>_{H^2}| / ||p||_{A^2(domain)},
// escalating precision (50, 100, 200, 400 digits) until it exceeds
// log10(condition) + 20 and two consecutive tiers agree to 1e-10. Throws
// NumericalError when 400 digits do not suffice.
RayleighResult rayleigh_constant(const BergmanDomain& domain, const CoefficientSource& f, int N);
// sup |sum_n c_n l_n| / ||sum_n c_n z^n|| for a functional given by its values
// l_n on monomials.
RayleighResult functional_norm(const BergmanDomain& domain, const std::vector<cplx>& l);

double observability_constant(const HardyFunction& f0, const AnnularSector& exterior, int N);
double reachability_constant(const HardyFunction& fT, const AnnularSector& interior, int N);
RayleighResult observability_constant(const CoefficientSource& f0, const AnnularSector& exterior,
                                      int N);
RayleighResult reachability_constant(const CoefficientSource& fT, const AnnularSector& interior,
                                     int N);

enum class GrowthVerdict { BoundedPlateau, Diverging, Inconclusive };
const char* to_string(GrowthVerdict v);

struct GrowthThresholds {
  double plateau = 1.1;
  double diverging = 2.0;
};

struct GrowthClassification {
  GrowthVerdict verdict = GrowthVerdict::Inconclusive;
  std::vector<double> ratios;  // per doubling of the order when orders are given
};

// Needs at least three constants. With orders, successive ratios are
// normalized to one doubling: (C_{k+1}/C_k)^{1/log2(N_{k+1}/N_k)}.
GrowthClassification classify_growth(const std::vector<double>& constants,
                                     const std::vector<int>& orders = {},
                                     const GrowthThresholds& th = {});

struct ObservabilityReport {
  std::string kind;  // "observability" or "reachability"
  std::string state;
  Side side = Side::Exterior;
  double T = 0.0;
  double theta1 = 0.0, theta2 = 0.0;
  std::vector<int> orders;
  std::vector<double> constants;
  std::vector<double> conditions;
  std::vector<int> digits;
  GrowthClassification growth;

  std::string to_json() const;
};

ObservabilityReport observability_report(const CoefficientSource& state, const AnnularSector& sector,
                                         const std::vector<int>& orders,
                                         const GrowthThresholds& th = {});

struct CostSweepRow {
  double horizon = 0.0;
  double epsilon = 0.0;
  double residual = 0.0;
  double control_norm = 0.0;
  bool ok = false;
  std::string error;
};

struct CostSweep {
  std::vector<CostSweepRow> rows;
  bool has_slope = false;
  double slope = 0.0;  // log ||u|| vs log T over horizons <= 1

  std::string to_csv() const;
};

struct CostSweepOptions {
  int N = 32;
  int steps = 512;
  double target_residual = 1e-3;
  double log10_eps_min = -20.0;
  double log10_eps_max = 0.0;
  int bisections = 60;
};

// Per horizon, bisects log10(eps) to the largest eps whose H^2 synthesis
// reaches the target residual and records that control norm.
CostSweep cost_vs_time_sweep(const HardyFunction& f0, const std::vector<double>& horizons,
                             const ArcInterval& arc, const CostSweepOptions& opt = {});

}  // namespace hh
