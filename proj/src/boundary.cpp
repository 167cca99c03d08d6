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

#include "halfheat/boundary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "quadrature.hpp"

namespace hh {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

namespace {

using ojson = nlohmann::ordered_json;

double wrap_pi(double t) { return std::remainder(t, kTwoPi); }

double smooth_step(double y) {
  if (y <= 0) return 0.0;
  if (y >= 1) return 1.0;
  const double a = std::exp(-1.0 / y), b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

double bump_value(double x) { return std::abs(x) < 1 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0; }

struct Cut {
  double at;
  int depth;
};

// Composite rule on [a, b] split at the cuts; every piece is graded toward
// its ends with the depth attached to that end.
QuadratureRule cut_rule(double a, double b, std::vector<Cut> cuts, int depth_a, int depth_b,
                        double hmax, int order) {
  std::vector<Cut> pts{{a, depth_a}};
  std::sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) { return x.at < y.at; });
  for (const Cut& c : cuts) {
    if (!(c.at > a && c.at < b)) continue;
    if (c.at - pts.back().at < 1e-15) {
      pts.back().depth = std::max(pts.back().depth, c.depth);
      continue;
    }
    pts.push_back(c);
  }
  if (b - pts.back().at < 1e-15 && pts.size() > 1) {
    pts.back() = {b, std::max(pts.back().depth, depth_b)};
  } else {
    pts.push_back({b, depth_b});
  }
  std::vector<Panel> panels;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    auto p = graded_panels(pts[i].at, pts[i + 1].at, hmax, pts[i].depth, pts[i + 1].depth);
    panels.insert(panels.end(), p.begin(), p.end());
  }
  return composite_rule(panels, order);
}

// Breakpoints shifted into the open interval (a, b).
std::vector<Cut> shifted_breaks(const std::vector<double>& breaks, double a, double b, int depth) {
  std::vector<Cut> out;
  for (double bp : breaks)
    for (int k = -2; k <= 2; ++k) {
      const double c = bp + k * kTwoPi;
      if (c > a && c < b) out.push_back({c, depth});
    }
  return out;
}

bool is_break(const std::vector<double>& breaks, double t) {
  for (double bp : breaks)
    if (std::abs(wrap_pi(t - bp)) < 1e-14) return true;
  return false;
}

// Rule for the whole circle starting at the first breakpoint.
QuadratureRule circle_rule(const std::vector<double>& breaks, int depth, double hmax, int order) {
  if (breaks.empty()) return cut_rule(0.0, kTwoPi, {}, 0, 0, hmax, order);
  const double a = breaks.front();
  return cut_rule(a, a + kTwoPi, shifted_breaks(breaks, a, a + kTwoPi, depth), depth, depth, hmax,
                  order);
}

ojson tail_json(const TailReport& r) {
  ojson j;
  j["value"] = r.value;
  j["tail_estimate"] = r.tail_estimate;
  j["trend"] = to_string(r.trend);
  j["block_sums"] = r.block_sums;
  return j;
}

}  // namespace

// ------------------------------------------------------------ BoundaryDensity

BoundaryDensity::BoundaryDensity(std::string name, Profile profile, std::vector<double> breakpoints)
    : name_(std::move(name)), profile_(std::move(profile)) {
  require(static_cast<bool>(profile_), "BoundaryDensity: empty profile");
  for (double b : breakpoints) {
    require(std::isfinite(b), "BoundaryDensity: non-finite breakpoint");
    double r = std::fmod(b, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    breaks_.push_back(r);
  }
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-15; }),
                breaks_.end());
}

BoundaryDensity BoundaryDensity::zero() {
  return BoundaryDensity("zero", [](double) { return cplx(0); }, {});
}

BoundaryDensity BoundaryDensity::triangle(double theta0, double center) {
  require(theta0 > 0 && theta0 < kPi, "triangle: theta0 must lie in (0, pi)");
  return BoundaryDensity(
      "triangle", [=](double t) { return cplx(triangle_profile(theta0, center, t)); },
      {center - theta0, center, center + theta0});
}

BoundaryDensity BoundaryDensity::smooth_bump(double center, double halfwidth) {
  require(halfwidth > 0 && halfwidth < kPi, "smooth_bump: halfwidth must lie in (0, pi)");
  return BoundaryDensity(
      "bump", [=](double t) { return cplx(bump_value(wrap_pi(t - center) / halfwidth)); },
      {center - halfwidth, center + halfwidth});
}

BoundaryDensity BoundaryDensity::indicator(const ArcInterval& arc) {
  return BoundaryDensity(
      "indicator", [arc](double t) { return cplx(arc.contains(t) ? 1.0 : 0.0); },
      {arc.theta1(), arc.theta2()});
}

BoundaryDensity BoundaryDensity::log_kernel(const ArcInterval& arc) {
  const double c = arc.center(), a = 0.95 * arc.length() / 2;
  auto f = [=](double t) {
    const double x = wrap_pi(t - c);
    const double chi = smooth_step((a - std::abs(x)) / (0.5 * a));
    if (chi == 0.0 || x == 0.0) return cplx(0);
    return chi * std::log(1.0 - std::polar(1.0, x));
  };
  return BoundaryDensity("log-kernel", f, {c - a, c - 0.5 * a, c, c + 0.5 * a, c + a});
}

BoundaryDensity BoundaryDensity::modulated_bump(const ArcInterval& arc, int k) {
  const double c = arc.center(), a = 0.45 * arc.length();
  return BoundaryDensity(
      "modulated-bump-" + std::to_string(k),
      [=](double t) { return std::polar(bump_value(wrap_pi(t - c) / a), k * t); }, {c - a, c + a});
}

BoundaryDensity BoundaryDensity::gaussian(double center, double sigma) {
  require(sigma > 0, "gaussian: sigma must be positive");
  return BoundaryDensity(
      "gaussian",
      [=](double t) {
        const double x = wrap_pi(t - center) / sigma;
        return cplx(std::exp(-0.5 * x * x));
      },
      {center + kPi});
}

BoundaryDensity BoundaryDensity::from_series(const CircleFunction& g) {
  return BoundaryDensity("series", [g](double t) { return g.evaluate(t); }, {});
}

double BoundaryDensity::integrate(double a, double b, const std::function<double(double, cplx)>& f,
                                  int depth) const {
  require(b >= a, "integrate: empty interval");
  const QuadratureRule r = cut_rule(a, b, shifted_breaks(breaks_, a, b, depth),
                                    is_break(breaks_, a) ? depth : 0,
                                    is_break(breaks_, b) ? depth : 0, kPi / 16, 20);
  double s = 0;
  for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i], (*this)(r.nodes[i]));
  return s / kTwoPi;
}

CircleFunction BoundaryDensity::coefficients(int nmax) const {
  require(nmax >= 0, "coefficients: nmax must be nonnegative");
  const double hmax = std::min(kPi / 16, 3.0 * kTwoPi / std::max(1, nmax));
  const QuadratureRule r = circle_rule(breaks_, 30, hmax, 20);
  std::vector<cplx> pos(nmax + 1, cplx(0)), neg(nmax + 1, cplx(0));
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const cplx v = (*this)(r.nodes[i]) * (r.weights[i] / kTwoPi);
    if (v == cplx(0)) continue;
    const cplx e = std::polar(1.0, -r.nodes[i]), ec = std::conj(e);
    cplx p = v, q = v;
    for (int n = 0; n <= nmax; ++n) {
      pos[n] += p;
      neg[n] += q;
      p *= e;
      q *= ec;
    }
  }
  CircleFunction g(nmax);
  for (int n = 0; n <= nmax; ++n) g.set(n, pos[n]);
  for (int n = 1; n <= nmax; ++n) g.set(-n, neg[n]);
  return g;
}

double BoundaryDensity::l2_norm() const {
  const double a = breaks_.empty() ? 0.0 : breaks_.front();
  return std::sqrt(integrate(a, a + kTwoPi, [](double, cplx v) { return std::norm(v); }));
}

double BoundaryDensity::support_residual(const ArcInterval& arc) const {
  return std::sqrt(integrate(arc.theta2(), arc.theta1() + kTwoPi,
                             [](double, cplx v) { return std::norm(v); }));
}

// ------------------------------------------------------------------ recovery

CircleFunction recover_boundary_density(const HardyFunction& f0,
                                        const std::optional<CircleFunction>& exterior) {
  if (!exterior) {
    throw ValidationError(
        "exterior coefficients are required; use regularized_inversion when they are unknown");
  }
  for (int n = 0; n <= exterior->nmax(); ++n)
    require((*exterior)[n] == cplx(0), "exterior data must have no modes n >= 0");
  const int nmax = std::max(f0.nmax(), exterior->nmax());
  CircleFunction g(nmax);
  for (int n = 0; n <= f0.nmax(); ++n) g.set(n, f0[n]);
  for (int n = 1; n <= exterior->nmax(); ++n) g.set(-n, -(*exterior)[-n]);
  return g;
}

InversionResult regularized_inversion(const HardyFunction& f0, const ArcInterval& arc,
                                      const InversionOptions& opt) {
  require(opt.K >= 1, "regularized_inversion: K must be positive");
  require(opt.energy_ratio > 0, "regularized_inversion: energy ratio must be positive");
  require(opt.log10_lambda_min < opt.log10_lambda_max, "regularized_inversion: empty lambda range");
  const int K = opt.K, P = f0.nmax() + 1, M = K + P;
  // Index i < K: mode i - K; otherwise mode i - K.
  auto ac = [&](int d) { return (d == 0 ? cplx(1) : cplx(0)) - arc.mean_exp(d); };
  Eigen::MatrixXcd Q(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) Q(i, j) = ac((j - K) - (i - K));
  Eigen::VectorXcd f(P);
  for (int n = 0; n < P; ++n) f(n) = f0[n];
  const double f2 = f.squaredNorm();

  InversionResult res;
  res.g = CircleFunction(std::max(K, P - 1));
  if (f2 == 0.0) {
    res.confinement = Verdict::Pass;
    return res;
  }
  const Eigen::MatrixXcd Qaa = Q.topLeftCorner(K, K);
  const Eigen::VectorXcd rhs = -Q.topRightCorner(K, P) * f;
  Eigen::VectorXd D(K);
  for (int i = 0; i < K; ++i) D(i) = K - i;
  auto solve = [&](double lambda) {
    Eigen::MatrixXcd A = Qaa;
    A.diagonal() += lambda * D.cast<cplx>();
    return Eigen::VectorXcd(A.ldlt().solve(rhs));
  };
  auto energy = [&](const Eigen::VectorXcd& a) { return (a.cwiseAbs2().array() * D.array()).sum(); };
  const double target = opt.energy_ratio * f2;
  double lo = opt.log10_lambda_min, hi = opt.log10_lambda_max, chosen;
  if (energy(solve(std::pow(10.0, lo))) <= target) {
    chosen = lo;
  } else if (energy(solve(std::pow(10.0, hi))) >= target) {
    chosen = hi;
  } else {
    for (int it = 0; it < opt.bisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      (energy(solve(std::pow(10.0, mid))) > target ? lo : hi) = mid;
    }
    chosen = hi;
  }
  res.lambda = std::pow(10.0, chosen);
  const Eigen::VectorXcd a = solve(res.lambda);
  if (!a.allFinite()) throw NumericalError("regularized_inversion: non-finite solution");
  Eigen::VectorXcd x(M);
  x << a, f;
  res.dirichlet_energy = energy(a);
  const double out = std::max(0.0, (x.adjoint() * Q * x)(0, 0).real());
  res.violation = std::sqrt(out / x.squaredNorm());
  for (int i = 0; i < K; ++i) res.g.set(i - K, a(i));
  for (int n = 0; n < P; ++n) res.g.set(n, f(n));
  res.confinement = res.violation <= opt.confinable      ? Verdict::Pass
                    : res.violation >= opt.cannot_confine ? Verdict::Fail
                                                          : Verdict::Inconclusive;
  return res;
}

InstabilityPoint instability_demo(const BoundaryDensity& chi, int k, int tail) {
  require(k >= 0, "instability_demo: k must be nonnegative");
  require(tail >= 1, "instability_demo: tail must be positive");
  const CircleFunction c = chi.coefficients(k + tail);
  InstabilityPoint p;
  p.k = k;
  double s = 0;
  for (int m = k + tail; m >= k; --m) s += std::norm(c[m]);
  p.projected = std::sqrt(s);
  p.full = chi.l2_norm();
  return p;
}

// ---------------------------------------------------------------- conditions

std::string ConditionReport::to_json() const {
  ojson j;
  j["convention"] = kConvention;
  j["norm"] = norm;
  j["support_residual"] = support_residual;
  j["dirichlet_tail"] = tail_json(dirichlet);
  j["endpoint"] = {{"levels", endpoint_levels},
                   {"value", endpoint_value},
                   {"trend", to_string(endpoint_trend)}};
  j["half_sobolev"] = tail_json(half_sobolev);
  j["labels"] = labels;
  j["necessary"] = to_string(necessary);
  j["sufficient"] = to_string(sufficient);
  j["w12"] = to_string(w12);
  return j.dump(2);
}

namespace {

Verdict combine(std::initializer_list<Verdict> vs) {
  bool all_pass = true;
  for (Verdict v : vs) {
    if (v == Verdict::Fail) return Verdict::Fail;
    all_pass = all_pass && v == Verdict::Pass;
  }
  return all_pass ? Verdict::Pass : Verdict::Inconclusive;
}

Verdict from_trend(Trend t) {
  return t == Trend::Convergent ? Verdict::Pass
         : t == Trend::Divergent ? Verdict::Fail
                                 : Verdict::Inconclusive;
}

}  // namespace

ConditionReport sufficient_condition_check(const BoundaryDensity& g, const ArcInterval& arc,
                                           const ConditionThresholds& th) {
  require(th.endpoint_levels >= 3, "endpoint_levels must be at least 3");
  require(th.nmax >= 8, "nmax must be at least 8");
  ConditionReport r;
  r.norm = g.l2_norm();
  r.support_residual = g.support_residual(arc);
  const CircleFunction c = g.coefficients(th.nmax);
  r.dirichlet = tail_report([&] {
    std::vector<double> t(th.nmax);
    for (int n = 1; n <= th.nmax; ++n) t[n - 1] = n * std::norm(c[-n]);
    return t;
  }(), th.tails);
  r.half_sobolev = tail_report([&] {
    std::vector<double> t(th.nmax);
    for (int n = 1; n <= th.nmax; ++n)
      t[n - 1] = std::sqrt(1.0 + double(n) * n) * (std::norm(c[n]) + std::norm(c[-n]));
    return t;
  }(), th.tails);

  // Endpoint-weighted integral: a base part away from the endpoints plus
  // dyadic shells on both sides of each endpoint.
  const cplx z1 = arc.zeta1(), z2 = arc.zeta2();
  auto weighted = [&](double t, cplx v) {
    const cplx e = std::polar(1.0, t);
    return std::norm(v) / std::abs((e - z1) * (e - z2));
  };
  const double d0 = std::min(arc.length(), kTwoPi - arc.length()) / 4;
  const double t1 = arc.theta1(), t2 = arc.theta2();
  const double base = g.integrate(t1 + d0, t2 - d0, weighted) +
                      g.integrate(t2 + d0, t1 + kTwoPi - d0, weighted);
  double total = base;
  for (int j = 1; j <= th.endpoint_levels; ++j) {
    const double inner = d0 * std::ldexp(1.0, -j), outer = 2 * inner;
    double s = 0;
    for (double e : {t1, t2}) {
      s += g.integrate(e + inner, e + outer, weighted);
      s += g.integrate(e - outer, e - inner, weighted);
    }
    r.endpoint_levels.push_back(s);
    total += s;
  }
  r.endpoint_value = total;
  r.endpoint_trend = classify_increments(r.endpoint_levels, total, th.tails);

  const bool zero = r.norm == 0.0;
  const Verdict support = zero || r.support_residual <= th.support_tol * r.norm ? Verdict::Pass
                                                                                : Verdict::Fail;
  r.necessary = zero ? Verdict::Pass : combine({support, from_trend(r.dirichlet.trend)});
  r.sufficient = zero ? Verdict::Pass
                      : combine({support, from_trend(r.dirichlet.trend),
                                 from_trend(r.endpoint_trend)});
  r.w12 = zero ? Verdict::Pass : combine({support, from_trend(r.half_sobolev.trend)});
  if (r.w12 == Verdict::Pass) r.labels.push_back("X^{1/2+}_{1/2-}");
  if (r.sufficient == Verdict::Pass) r.labels.push_back("0X^{0+}_{1/2-}");
  if (r.necessary == Verdict::Pass) r.labels.push_back("X^{0+}_{1/2-}");
  return r;
}

ConditionReport sufficient_condition_check(const CircleFunction& g, const ArcInterval& arc,
                                           const ConditionThresholds& th) {
  return sufficient_condition_check(BoundaryDensity::from_series(g), arc, th);
}

bool w12_00_classify(const BoundaryDensity& g, const ArcInterval& arc, ConditionReport* report,
                     const ConditionThresholds& th) {
  ConditionReport r = sufficient_condition_check(g, arc, th);
  const bool ok = r.w12 == Verdict::Pass;
  if (report) *report = std::move(r);
  return ok;
}

// ---------------------------------------------------------- exterior Poisson

ExteriorPoisson::ExteriorPoisson(const CircleFunction& g) {
  const int n = g.nmax() + 1;
  CircleFunction h(n);
  for (int m = -g.nmax(); m <= g.nmax(); ++m) h.set(m + 1, g[m]);
  h_ = std::move(h);
}

ExteriorPoisson::ExteriorPoisson(BoundaryDensity g) : g_(std::move(g)) {}

cplx ExteriorPoisson::operator()(cplx z) const {
  const double r = std::abs(z);
  require(r > 1.0, "exterior_poisson: |z| must exceed 1");
  if (h_) {
    const cplx zi = 1.0 / z, zbi = std::conj(zi);
    cplx s(0), p = zi;
    for (int n = 1; n <= h_->nmax(); ++n, p *= zi) s += (*h_)[-n] * p;
    p = cplx(1);
    for (int n = 0; n <= h_->nmax(); ++n, p *= zbi) s += (*h_)[n] * p;
    return s;
  }
  const double phi = std::arg(z);
  const double rm1 = r - 1.0;
  const int depth_phi = std::max(0, static_cast<int>(std::ceil(std::log2(kPi / 16 / rm1))) + 3);
  std::vector<Cut> cuts = shifted_breaks(g_->breakpoints(), phi - kPi, phi + kPi, 20);
  cuts.push_back({phi, depth_phi});
  const QuadratureRule q = cut_rule(phi - kPi, phi + kPi, cuts, 0, 0, kPi / 16, 20);
  cplx s(0);
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    const double t = q.nodes[i];
    const double sh = std::sin(0.5 * (phi - t));
    const double ker = rm1 * (r + 1.0) / (rm1 * rm1 + 4.0 * r * sh * sh) / kTwoPi;
    s += q.weights[i] * ker * std::polar(1.0, t) * (*g_)(t);
  }
  return s;
}

ExteriorPoisson exterior_poisson(const CircleFunction& g) { return ExteriorPoisson(g); }
ExteriorPoisson exterior_poisson(const BoundaryDensity& g) { return ExteriorPoisson(g); }

// ------------------------------------------------------------ pseudo-Carleson

bool ContourSet::valid() const {
  if (!(eta0 > 0)) return false;
  const double d1 = std::abs(zeta1p - zeta1), d2 = std::abs(zeta2p - zeta2);
  const double lo = eta0 * kPi / 8 * (1 - 1e-12), hi = eta0 * kPi / 4 * (1 + 1e-12);
  return d1 >= lo && d1 <= hi && d2 >= lo && d2 <= hi && 2 * delta < theta2 - theta1;
}

ContourSet make_contours(const AnnularSector& exterior, std::optional<double> eta0) {
  require(exterior.side() == Side::Exterior, "contours need an exterior sector");
  ContourSet c;
  c.eta0 = eta0.value_or(exterior.T() / 4);
  require(c.eta0 > 0 && c.eta0 < exterior.T(), "eta0 must lie in (0, T)");
  const double chord = c.eta0 * kPi / 6;
  require(chord < 2.0, "eta0 too large for the chord constraint");
  c.delta = 2 * std::asin(chord / 2);
  c.theta1 = exterior.arc().theta1();
  c.theta2 = exterior.arc().theta2();
  c.zeta1 = std::polar(1.0, c.theta1);
  c.zeta2 = std::polar(1.0, c.theta2);
  c.zeta1p = std::polar(1.0, c.theta1 + c.delta);
  c.zeta2p = std::polar(1.0, c.theta2 - c.delta);
  c.end1 = std::exp(c.eta0) * c.zeta1p;
  c.end2 = std::exp(c.eta0) * c.zeta2p;
  require(c.valid(), "contour placement violates the distance band or leaves the arc");
  return c;
}

std::string PseudoCarlesonReport::to_json() const {
  ojson j;
  j["convention"] = kConvention;
  j["orders"] = orders;
  j["ratios"] = ratios;
  j["monomial_max"] = monomial_max;
  j["gamma0"] = gamma0;
  j["verdict"] = to_string(growth.verdict);
  j["normalized_ratios"] = growth.ratios;
  return j.dump(2);
}

PseudoCarlesonReport pseudo_carleson_ratio(const BoundaryDensity& g, const AnnularSector& exterior,
                                           const ContourSet& contours,
                                           const std::vector<int>& orders,
                                           const GrowthThresholds& th) {
  require(exterior.side() == Side::Exterior, "pseudo_carleson_ratio needs an exterior sector");
  require(contours.valid(), "invalid contour set");
  require(!orders.empty() && std::is_sorted(orders.begin(), orders.end()) && orders.front() >= 0,
          "orders must be nonempty, sorted and nonnegative");
  const int N = orders.back();
  const ExteriorPoisson G(g);
  std::vector<cplx> l(N + 1, cplx(0)), l0(N + 1, cplx(0));

  const QuadratureRule seg = composite_rule(graded_panels(0.0, 1.0, 1.0, 30, 0), 20);
  const std::array<std::tuple<cplx, cplx, double>, 2> segs = {
      std::tuple{contours.zeta1, contours.end1, -1.0},
      std::tuple{contours.zeta2, contours.end2, 1.0}};
  for (const auto& [a, b, sign] : segs) {
    const cplx dz = b - a;
    for (size_t i = 0; i < seg.nodes.size(); ++i) {
      const cplx z = a + seg.nodes[i] * dz;
      const cplx w = sign * seg.weights[i] * std::conj(G(z)) * dz;
      cplx p(1);
      for (int n = 0; n <= N; ++n, p *= z) l[n] += w * p;
    }
  }
  // Inner arc at radius e^{eta0}.
  const double rho = std::exp(contours.eta0);
  const QuadratureRule arc = composite_rule(
      graded_panels(contours.theta1 + contours.delta, contours.theta2 - contours.delta, 0.05, 0, 0),
      20);
  for (size_t i = 0; i < arc.nodes.size(); ++i) {
    const cplx z = std::polar(rho, arc.nodes[i]);
    const cplx w = arc.weights[i] * std::conj(G(z)) * cplx(0, 1) * z;
    cplx p(1);
    for (int n = 0; n <= N; ++n, p *= z) l0[n] += w * p;
  }

  const BergmanDomain dom = BergmanDomain::sector(exterior);
  PseudoCarlesonReport rep;
  rep.orders = orders;
  double mono = 0;
  int done = -1;
  for (int order : orders) {
    for (int n = done + 1; n <= order; ++n)
      mono = std::max(mono, std::abs(l[n]) / std::sqrt(dom.radial(2 * n) * dom.angular(0).real()));
    done = order;
    rep.monomial_max.push_back(mono);
    const std::vector<cplx> lp(l.begin(), l.begin() + order + 1);
    const std::vector<cplx> l0p(l0.begin(), l0.begin() + order + 1);
    rep.ratios.push_back(functional_norm(dom, lp).value);
    rep.gamma0.push_back(functional_norm(dom, l0p).value);
  }
  rep.growth = classify_carleson_growth(rep.ratios, orders, th);
  return rep;
}

GrowthClassification classify_carleson_growth(const std::vector<double>& ratios,
                                              const std::vector<int>& orders,
                                              const GrowthThresholds& th) {
  require(ratios.size() == orders.size(), "ratios and orders differ in length");
  GrowthClassification g;
  if (ratios.size() < 3) return g;
  for (size_t i = 0; i + 1 < ratios.size(); ++i) {
    require(orders[i] > 0 && orders[i + 1] > orders[i], "orders must be positive and increasing");
    const double r = ratios[i] == 0.0 && ratios[i + 1] == 0.0 ? 1.0 : ratios[i + 1] / ratios[i];
    g.ratios.push_back(std::pow(r, 1.0 / std::log2(double(orders[i + 1]) / orders[i])));
  }
  if (g.ratios.back() < th.plateau) {
    g.verdict = GrowthVerdict::BoundedPlateau;
  } else if (*std::min_element(g.ratios.begin(), g.ratios.end()) >= th.diverging) {
    g.verdict = GrowthVerdict::Diverging;
  }
  return g;
}

// -------------------------------------------------------- rectangle harmonic

namespace {

// sinh(k (T - s)) / sinh(k T) and its s-derivative, overflow-free.
void sinh_ratio(double k, double T, double s, double& E, double& dE) {
  const double den = -std::expm1(-2 * k * T);
  const double q = std::exp(-2 * k * (T - s));
  const double base = std::exp(-k * s) / den;
  E = base * (1 - q);
  dE = -k * base * (1 + q);
}

// int_0^L e^{i nu x} dx.
cplx exp_integral(double nu, double L) {
  if (std::abs(nu * L) < 1e-8) return cplx(L, 0.5 * nu * L * L);
  return (std::polar(1.0, nu * L) - 1.0) / cplx(0, nu);
}

}  // namespace

double RectangleHarmonic::kappa(int k) const { return k * kPi / L; }

cplx RectangleHarmonic::value(double s, double phi) const {
  cplx v(0);
  for (size_t k = 1; k <= b.size(); ++k) {
    double E, dE;
    sinh_ratio(kappa(k), T, s, E, dE);
    v += b[k - 1] * E * std::sin(kappa(k) * (phi - theta1));
  }
  return v;
}

cplx RectangleHarmonic::dw(double s, double phi) const {
  cplx v(0);
  for (size_t k = 1; k <= b.size(); ++k) {
    const double kp = kappa(k);
    double E, dE;
    sinh_ratio(kp, T, s, E, dE);
    const double x = kp * (phi - theta1);
    v += b[k - 1] * cplx(dE * std::sin(x), -kp * E * std::cos(x));
  }
  return 0.5 * v;
}

RectangleHarmonic rectangle_harmonic_extension(const BoundaryDensity& g,
                                               const AnnularSector& exterior, int K) {
  require(exterior.side() == Side::Exterior, "rectangle extension needs an exterior sector");
  require(K >= 1, "rectangle extension: K must be positive");
  const ArcInterval& arc = exterior.arc();
  const double norm = g.l2_norm();
  require(g.support_residual(arc) <= 1e-10 * norm,
          "rectangle extension: density is not supported in the closed arc");
  RectangleHarmonic h;
  h.T = exterior.T();
  h.theta1 = arc.theta1();
  h.L = arc.length();
  h.b.assign(K, cplx(0));
  if (norm == 0.0) return h;
  const double t1 = arc.theta1(), t2 = arc.theta2();
  const QuadratureRule q = cut_rule(t1, t2, shifted_breaks(g.breakpoints(), t1, t2, 20),
                                    is_break(g.breakpoints(), t1) ? 20 : 0,
                                    is_break(g.breakpoints(), t2) ? 20 : 0, h.L / 2048, 16);
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    const double phi = q.nodes[i];
    const cplx d = q.weights[i] * std::polar(1.0, phi) * g(phi) * (2.0 / h.L);
    if (d == cplx(0)) continue;
    const cplx e = std::polar(1.0, h.kappa(1) * (phi - t1));
    cplx p = e;
    for (int k = 1; k <= K; ++k, p *= e) h.b[k - 1] += d * p.imag();
  }
  return h;
}

double dw_norm_squared(const RectangleHarmonic& h, double s0, double s1) {
  require(s0 >= 0 && s1 <= h.T && s0 <= s1, "dw_norm_squared: need 0 <= s0 <= s1 <= T");
  const int K = static_cast<int>(h.b.size());
  if (K == 0 || s0 == s1) return 0.0;
  // S(j,k) = int_0^L sin(kappa_j x) cos(kappa_k x) dx.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K, K);
  for (int j = 1; j <= K; ++j)
    for (int k = 1; k <= K; ++k)
      if ((j + k) % 2) {
        const double a = h.kappa(j), c = h.kappa(k);
        S(j - 1, k - 1) = 2 * a / (a * a - c * c);
      }
  const QuadratureRule q =
      composite_rule(graded_panels(s0, s1, (s1 - s0) / 8, s0 == 0.0 ? 40 : 0, 0), 24);
  Eigen::VectorXcd A(K), B(K);
  double total = 0;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    for (int k = 1; k <= K; ++k) {
      double E, dE;
      sinh_ratio(h.kappa(k), h.T, q.nodes[i], E, dE);
      A(k - 1) = h.b[k - 1] * dE;
      B(k - 1) = h.b[k - 1] * (h.kappa(k) * E);
    }
    const cplx cross = A.dot(S * B);  // sum conj(A_j) S_jk B_k
    const double v = 0.5 * h.L * (A.squaredNorm() + B.squaredNorm()) + 2 * (cplx(0, -1) * cross).real();
    total += q.weights[i] * 0.25 * v;
  }
  return total;
}

std::string DzNormReport::to_csv() const {
  std::string out = "delta,norm_squared,increment\n";
  char buf[128];
  for (size_t j = 0; j < deltas.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", deltas[j], norms[j], increments[j]);
    out += buf;
  }
  return out;
}

DzNormReport dz_norm_diagnostic(const RectangleHarmonic& h, int levels, const TailThresholds& th) {
  require(levels >= 1, "dz_norm_diagnostic: levels must be positive");
  DzNormReport r;
  double acc = 0;
  for (int j = 1; j <= levels; ++j) {
    const double lo = h.T * std::ldexp(1.0, -j), hi = 2 * lo;
    const double inc = dw_norm_squared(h, lo, hi);
    acc += inc;
    r.deltas.push_back(lo);
    r.norms.push_back(acc);
    r.increments.push_back(inc);
  }
  r.verdict = classify_increments(r.increments, acc, th);
  return r;
}

// ------------------------------------------------------------ representer

cplx BergmanRepresenter::operator()(cplx z) const {
  const double s = std::log(std::abs(z));
  double phi = std::arg(z);
  phi = h_.theta1 + std::fmod(std::fmod(phi - h_.theta1, kTwoPi) + kTwoPi, kTwoPi);
  require(s > 0 && s < h_.T && phi > h_.theta1 && phi < h_.theta1 + h_.L,
          "representer evaluated outside the sector");
  return -(1.0 / kPi) * h_.dw(s, phi) / z;
}

std::vector<double> BergmanRepresenter::duality_residuals(const CircleFunction& g, int kmax) const {
  require(kmax >= 0, "duality_residuals: kmax must be nonnegative");
  const int K = static_cast<int>(h_.b.size());
  const double L = h_.L, T = h_.T;
  const QuadratureRule q = composite_rule(graded_panels(0.0, T, T / 8, 40, 0), 24);
  std::vector<double> out;
  for (int k = 0; k <= kmax; ++k) {
    const int m = k + 1;
    // Angular integrals of e^{i m phi} against sin and cos of each mode.
    std::vector<cplx> Is(K), Ic(K);
    const cplx shift = std::polar(1.0, m * h_.theta1);
    for (int j = 1; j <= K; ++j) {
      const double kp = h_.kappa(j);
      const cplx Fp = exp_integral(m + kp, L), Fm = exp_integral(m - kp, L);
      Is[j - 1] = shift * (Fp - Fm) / cplx(0, 2);
      Ic[j - 1] = shift * (Fp + Fm) / 2.0;
    }
    cplx I(0);
    for (size_t i = 0; i < q.nodes.size(); ++i) {
      const double s = q.nodes[i];
      cplx J(0);
      for (int j = 1; j <= K; ++j) {
        double E, dE;
        sinh_ratio(h_.kappa(j), T, s, E, dE);
        J += std::conj(h_.b[j - 1]) * (dE * Is[j - 1] + cplx(0, h_.kappa(j) * E) * Ic[j - 1]);
      }
      I += q.weights[i] * std::exp(m * s) * 0.5 * J;
    }
    I *= -1.0 / kPi;
    const double znorm = std::sqrt(L * std::expm1(T * (2 * k + 2)) / (2 * k + 2));
    out.push_back(std::abs(std::conj(g[k]) - I) / znorm);
  }
  return out;
}

double BergmanRepresenter::dbar_residual(int grid, double step) const {
  require(grid >= 2 && step > 0, "dbar_residual: bad grid");
  double worst = 0, scale = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double s = h_.T * (0.25 + 0.5 * i / (grid - 1));
      const double phi = h_.theta1 + h_.L * (0.25 + 0.5 * j / (grid - 1));
      const cplx z = std::exp(cplx(s, phi));
      auto d = [&](cplx dir) {
        const cplx hstep = step * dir;
        return (-(*this)(z + 2.0 * hstep) + 8.0 * (*this)(z + hstep) - 8.0 * (*this)(z - hstep) +
                (*this)(z - 2.0 * hstep)) /
               (12.0 * step);
      };
      const cplx dbar = 0.5 * (d(1.0) + cplx(0, 1) * d(cplx(0, 1)));
      worst = std::max(worst, std::abs(dbar));
      scale = std::max(scale, std::abs((*this)(z)));
    }
  return scale > 0 ? worst / scale : 0.0;
}

BergmanRepresenter bergman_representer(const BoundaryDensity& g, const AnnularSector& exterior,
                                       int K) {
  RectangleHarmonic h = rectangle_harmonic_extension(g, exterior, K);
  const DzNormReport dz = dz_norm_diagnostic(h);
  require(dz.verdict == Trend::Convergent,
          "bergman_representer: the d_z norm diagnostic is not convergent");
  return BergmanRepresenter(std::move(h));
}

// ---------------------------------------------------------------- hierarchy

std::string HierarchyReport::to_json() const {
  ojson j;
  j["convention"] = kConvention;
  j["density"] = name;
  ojson lv = ojson::array();
  for (const auto& [n, v] : levels) lv.push_back({{"level", n}, {"verdict", to_string(v)}});
  j["levels"] = lv;
  j["violations"] = violations;
  j["conditions"] = ojson::parse(conditions.to_json());
  if (dz) {
    j["dz"] = {{"deltas", dz->deltas},
               {"norms", dz->norms},
               {"increments", dz->increments},
               {"verdict", to_string(dz->verdict)}};
  }
  if (carleson) j["pseudo_carleson"] = ojson::parse(carleson->to_json());
  return j.dump(2);
}

HierarchyReport condition_hierarchy(const BoundaryDensity& g, const AnnularSector& exterior,
                                    const ConditionThresholds& th) {
  require(exterior.side() == Side::Exterior, "condition_hierarchy needs an exterior sector");
  HierarchyReport r;
  r.name = g.name();
  r.conditions = sufficient_condition_check(g, exterior.arc(), th);
  Verdict cns;
  const bool supported =
      r.conditions.norm == 0.0 ||
      r.conditions.support_residual <= th.support_tol * r.conditions.norm;
  if (!supported) {
    cns = Verdict::Fail;
  } else {
    const RectangleHarmonic h = rectangle_harmonic_extension(g, exterior);
    r.dz = dz_norm_diagnostic(h, 8, th.tails);
    r.carleson = pseudo_carleson_ratio(g, exterior, make_contours(exterior));
    const Verdict pc = r.carleson->growth.verdict == GrowthVerdict::BoundedPlateau ? Verdict::Pass
                       : r.carleson->growth.verdict == GrowthVerdict::Diverging    ? Verdict::Fail
                                                                                   : Verdict::Inconclusive;
    cns = combine({from_trend(r.dz->verdict), pc});
  }
  r.levels = {{"half-sobolev", r.conditions.w12},
              {"sufficient", r.conditions.sufficient},
              {"characterization", cns},
              {"necessary", r.conditions.necessary}};
  if (cns == Verdict::Pass) r.conditions.labels.push_back("X~");
  for (size_t i = 0; i < r.levels.size(); ++i)
    for (size_t j = i + 1; j < r.levels.size(); ++j)
      if (r.levels[i].second == Verdict::Pass && r.levels[j].second == Verdict::Fail) ++r.violations;
  return r;
}

std::vector<BoundaryDensity> fixture_corpus(const ArcInterval& arc) {
  const double L = arc.length(), c = arc.center();
  return {BoundaryDensity::triangle(L / 4, c),
          BoundaryDensity::smooth_bump(c, 0.45 * L),
          BoundaryDensity::log_kernel(arc),
          BoundaryDensity::indicator(arc),
          BoundaryDensity::modulated_bump(arc, 4),
          BoundaryDensity::modulated_bump(arc, 16)};
}

}  // namespace hh
