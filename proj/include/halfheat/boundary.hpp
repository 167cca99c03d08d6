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
#include <optional>
#include <string>
#include <vector>

#include "halfheat/observability.hpp"
#include "halfheat/sector.hpp"
#include "halfheat/spectral.hpp"

namespace hh {

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

// A density on the circle known pointwise, with the angles where it is not
// smooth. All quadratures split at the breakpoints and grade toward them.
class BoundaryDensity {
 public:
  using Profile = std::function<cplx(double)>;

  BoundaryDensity(std::string name, Profile profile, std::vector<double> breakpoints);

  static BoundaryDensity zero();
  static BoundaryDensity triangle(double theta0, double center);
  // exp(1 - 1/(1 - x^2)), x = (t - center)/halfwidth.
  static BoundaryDensity smooth_bump(double center, double halfwidth);
  static BoundaryDensity indicator(const ArcInterval& arc);
  // chi(t) log(1 - e^{i(t - c)}) with c the arc centre and chi a smooth
  // plateau equal to 1 on |t - c| <= a/2 and 0 beyond a = 0.95 L/2.
  static BoundaryDensity log_kernel(const ArcInterval& arc);
  // e^{ikt} times smooth_bump(centre, 0.45 L).
  static BoundaryDensity modulated_bump(const ArcInterval& arc, int k);
  static BoundaryDensity from_series(const CircleFunction& g);
  // exp(-(t - center)^2 / (2 sigma^2)) on |t - center| <= pi, no breakpoints.
  static BoundaryDensity gaussian(double center, double sigma);

  const std::string& name() const { return name_; }
  cplx operator()(double t) const { return profile_(t); }
  // Reduced into [0, 2pi), sorted.
  const std::vector<double>& breakpoints() const { return breaks_; }

  // Modes -nmax..nmax by graded composite Gauss-Legendre quadrature.
  CircleFunction coefficients(int nmax) const;
  // sqrt((1/2pi) int |g|^2).
  double l2_norm() const;
  // sqrt((1/2pi) int over the complement of the closed arc of |g|^2).
  double support_residual(const ArcInterval& arc) const;

  // (1/2pi) int_a^b f(t, g(t)) dt split at breakpoints and graded toward them.
  double integrate(double a, double b, const std::function<double(double, cplx)>& f,
                   int depth = 30) const;

 private:
  std::string name_;
  Profile profile_;
  std::vector<double> breaks_;
};

// g with g^(n) = a_n for n >= 0 and g^(n) = -a_n for n < 0, where a_n are the
// Taylor coefficients of f0 and the exterior coefficients of its extension.
// Exterior data must have no modes n >= 0.
CircleFunction recover_boundary_density(const HardyFunction& f0,
                                        const std::optional<CircleFunction>& exterior);

struct InversionOptions {
  int K = 128;                   // exterior modes -K..-1
  double energy_ratio = 10.0;    // target sum |n||a_n|^2 = ratio * ||f0||^2
  double log10_lambda_min = -14.0;
  double log10_lambda_max = 4.0;
  int bisections = 60;
  double cannot_confine = 0.05;  // violation at or above: cannot be confined
  double confinable = 1e-2;      // violation at or below: confinable
};

struct InversionResult {
  CircleFunction g;
  double lambda = 0.0;
  double dirichlet_energy = 0.0;
  double violation = 0.0;  // ||1_{complement} g|| / ||g||
  Verdict confinement = Verdict::Inconclusive;  // Pass: confinable
};

// Ridge-regularized least squares for exterior coefficients that push the
// recovered density onto the arc. A diagnostic, not an inverse.
InversionResult regularized_inversion(const HardyFunction& f0, const ArcInterval& arc,
                                      const InversionOptions& opt = {});

struct InstabilityPoint {
  int k = 0;
  double projected = 0.0;  // ||P+ chi_k||
  double full = 0.0;       // ||chi_k||
};

// chi_k = e^{-ikx} chi; chi^ is computed once to modes k + tail.
InstabilityPoint instability_demo(const BoundaryDensity& chi, int k, int tail = 512);

struct ConditionThresholds {
  double support_tol = 1e-10;  // relative to ||g||
  int endpoint_levels = 12;
  TailThresholds tails{};
  int nmax = 4096;  // Fourier modes for the tail fits
};

struct ConditionReport {
  double norm = 0.0;
  double support_residual = 0.0;
  TailReport dirichlet;
  std::vector<double> endpoint_levels;  // increments per dyadic shell
  double endpoint_value = 0.0;
  Trend endpoint_trend = Trend::Inconclusive;
  TailReport half_sobolev;
  std::vector<std::string> labels;  // regularity classes the density satisfies
  Verdict necessary = Verdict::Inconclusive;
  Verdict sufficient = Verdict::Inconclusive;
  Verdict w12 = Verdict::Inconclusive;

  std::string to_json() const;
};

ConditionReport sufficient_condition_check(const BoundaryDensity& g, const ArcInterval& arc,
                                           const ConditionThresholds& th = {});
ConditionReport sufficient_condition_check(const CircleFunction& g, const ArcInterval& arc,
                                           const ConditionThresholds& th = {});
// Fills w12 in addition; returns w12 == Pass.
bool w12_00_classify(const BoundaryDensity& g, const ArcInterval& arc, ConditionReport* report,
                     const ConditionThresholds& th = {});

// Exterior harmonic extension of h = e^{it} g. Series form for a
// CircleFunction: sum_{n<0} h^(n) z^n + sum_{n>=0} h^(n) conj(z)^{-n}.
// Density form: Poisson integral by graded quadrature.
class ExteriorPoisson {
 public:
  explicit ExteriorPoisson(const CircleFunction& g);
  explicit ExteriorPoisson(BoundaryDensity g);
  // |z| <= 1 is a ValidationError.
  cplx operator()(cplx z) const;

 private:
  std::optional<CircleFunction> h_;
  std::optional<BoundaryDensity> g_;
};

ExteriorPoisson exterior_poisson(const CircleFunction& g);
ExteriorPoisson exterior_poisson(const BoundaryDensity& g);

struct ContourSet {
  double eta0 = 0.0;
  double theta1 = 0.0, theta2 = 0.0;
  double delta = 0.0;  // angular offset of the shrunken arc
  cplx zeta1, zeta2;      // arc endpoints
  cplx zeta1p, zeta2p;    // e^{i(theta1 + delta)}, e^{i(theta2 - delta)}
  cplx end1, end2;        // e^{eta0} zeta1p, e^{eta0} zeta2p

  // eta0 pi/8 <= |zeta_k' - zeta_k| <= eta0 pi/4 and the offsets fit in the arc.
  bool valid() const;
};

// eta0 = T/4 by default, |zeta_k' - zeta_k| = eta0 pi/6.
ContourSet make_contours(const AnnularSector& exterior, std::optional<double> eta0 = {});

struct PseudoCarlesonReport {
  std::vector<int> orders;
  std::vector<double> ratios;           // functional norm on degree <= N
  std::vector<double> monomial_max;     // max_n |l_n| / ||z^n||
  std::vector<double> gamma0;           // inner-arc contribution, same norm
  GrowthClassification growth;

  std::string to_json() const;
};

// Ratios grow in steps with the order, so the verdict looks at doublings:
// plateau when the last normalized ratio is below `plateau`, diverging when
// every normalized ratio is at least `diverging`.
inline constexpr GrowthThresholds kPseudoCarlesonThresholds{1.1, 1.15};
GrowthClassification classify_carleson_growth(const std::vector<double>& ratios,
                                              const std::vector<int>& orders,
                                              const GrowthThresholds& th = kPseudoCarlesonThresholds);

// l_n = sum_k sign_k int_{Gamma_k} conj(G) z^n dz with sign -1 on Gamma_1 and
// +1 on Gamma_2, normalized against A^2 of the exterior sector.
PseudoCarlesonReport pseudo_carleson_ratio(const BoundaryDensity& g, const AnnularSector& exterior,
                                           const ContourSet& contours,
                                           const std::vector<int>& orders = {6, 12, 24},
                                           const GrowthThresholds& th = kPseudoCarlesonThresholds);

// h(s, phi) = sum_k b_k sinh(kappa_k (T - s))/sinh(kappa_k T) sin(kappa_k (phi - theta1)),
// kappa_k = k pi / L, in w = s + i phi = log z.
struct RectangleHarmonic {
  double T = 0.0;
  double theta1 = 0.0;
  double L = 0.0;
  std::vector<cplx> b;  // b[k-1] for k = 1..K

  double kappa(int k) const;
  cplx value(double s, double phi) const;
  // d_w h = (1/2)(d_s - i d_phi) h.
  cplx dw(double s, double phi) const;
};

RectangleHarmonic rectangle_harmonic_extension(const BoundaryDensity& g,
                                               const AnnularSector& exterior, int K = 256);

// int_{s0}^{s1} int_{theta1}^{theta2} |d_w h|^2 dphi ds.
double dw_norm_squared(const RectangleHarmonic& h, double s0, double s1);

struct DzNormReport {
  std::vector<double> deltas;      // T 2^{-j}
  std::vector<double> norms;       // squared norm over (delta_j, T)
  std::vector<double> increments;  // per level
  Trend verdict = Trend::Inconclusive;

  std::string to_csv() const;
};

DzNormReport dz_norm_diagnostic(const RectangleHarmonic& h, int levels = 8,
                                const TailThresholds& th = {});

// psi(z) = -(1/pi) (1/z) d_w h(log z) on the exterior sector.
class BergmanRepresenter {
 public:
  explicit BergmanRepresenter(RectangleHarmonic h) : h_(std::move(h)) {}
  cplx operator()(cplx z) const;
  const RectangleHarmonic& field() const { return h_; }

  // |conj(g^(k)) - int z^k conj(psi) dA| / ||z^k||_{A^2}, k = 0..kmax.
  std::vector<double> duality_residuals(const CircleFunction& g, int kmax) const;
  // Max over an interior grid of |d_zbar psi| / max |psi| by fourth-order
  // differences.
  double dbar_residual(int grid = 24, double step = 1e-3) const;

 private:
  RectangleHarmonic h_;
};

// Rejects densities whose dz diagnostic is not convergent.
BergmanRepresenter bergman_representer(const BoundaryDensity& g, const AnnularSector& exterior,
                                       int K = 256);

struct HierarchyReport {
  std::string name;
  // Strongest first: half-Sobolev, sufficient, characterization, necessary.
  std::vector<std::pair<std::string, Verdict>> levels;
  int violations = 0;
  ConditionReport conditions;
  std::optional<DzNormReport> dz;
  std::optional<PseudoCarlesonReport> carleson;

  std::string to_json() const;
};

// A violation is a definitive pass at a stronger level together with a
// definitive fail at a weaker one.
HierarchyReport condition_hierarchy(const BoundaryDensity& g, const AnnularSector& exterior,
                                    const ConditionThresholds& th = {});

// Triangle, bump, log kernel, indicator and modulated bumps k = 4, 16.
std::vector<BoundaryDensity> fixture_corpus(const ArcInterval& arc);

}  // namespace hh
