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

#include "halfheat/observability.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "halfheat/hum.hpp"
#include "json.hpp"
#include "sector_mp.hpp"

namespace hh {

// ------------------------------------------------------------ CoefficientSource

CoefficientSource CoefficientSource::triangle(double theta0, double center) {
  require(theta0 > 0 && theta0 < kPi, "triangle: theta0 must lie in (0, pi)");
  CoefficientSource s;
  s.kind_ = Kind::Triangle;
  s.p1_ = theta0;
  s.p2_ = center;
  s.name_ = "triangle";
  return s;
}

CoefficientSource CoefficientSource::kernel(cplx u) {
  require(std::abs(u) < 1.0, "kernel: |u| must be < 1");
  CoefficientSource s;
  s.kind_ = Kind::Kernel;
  s.u_ = u;
  s.name_ = "kernel";
  return s;
}

CoefficientSource CoefficientSource::poly_bump(double center, double halfwidth, int power) {
  require(halfwidth > 0 && halfwidth < kPi, "poly_bump: halfwidth must lie in (0, pi)");
  require(power >= 1 && power <= 32, "poly_bump: power must lie in [1, 32]");
  CoefficientSource s;
  s.kind_ = Kind::PolyBump;
  s.p1_ = center;
  s.p2_ = halfwidth;
  s.power_ = power;
  s.name_ = "poly_bump";
  return s;
}

CoefficientSource CoefficientSource::list(const HardyFunction& f) {
  CoefficientSource s;
  s.kind_ = Kind::List;
  s.list_ = f;
  s.name_ = "list";
  return s;
}

CoefficientSource CoefficientSource::scaled(cplx f) const {
  CoefficientSource s = *this;
  s.scale_ *= f;
  return s;
}

namespace {

using mp::cx;

template <class R>
R binomial(int p, int j) {
  R b(1);
  for (int i = 1; i <= j; ++i) b = b * R(p - j + i) / R(i);
  return b;
}

// int_{-1}^{1} (1 - x^2)^p e^{-i nu x} dx, by repeated integration by parts.
template <class R>
R bump_integral(int p, const R& nu) {
  if (nu == 0) {
    R s(0);
    for (int j = 0; j <= p; ++j) s += binomial<R>(p, j) * R(j % 2 ? -2 : 2) / R(2 * j + 1);
    return s;
  }
  // P^{(k)}(1) for P(x) = sum_j C(p,j) (-1)^j x^{2j}.
  const int deg = 2 * p;
  std::vector<R> dk(deg + 1, R(0));
  for (int j = 0; j <= p; ++j) {
    const R c = binomial<R>(p, j) * R(j % 2 ? -1 : 1);
    R fall(1);  // (2j)! / (2j-k)!
    for (int k = 0; k <= 2 * j; ++k) {
      dk[k] += c * fall;
      fall *= R(2 * j - k);
    }
  }
  // lambda = -i nu; int P e^{lambda x} = sum_k (-1)^k [P^(k) e^{lambda x}] / lambda^{k+1}.
  const cx<R> lam(R(0), -nu);
  const cx<R> ep = mp::expi<R>(-nu), em = mp::expi<R>(nu);
  cx<R> sum, lp = lam;
  for (int k = 0; k <= deg; ++k) {
    const R sgn_k = k % 2 ? R(-1) : R(1);  // P^(k)(-1) = (-1)^k P^(k)(1)
    const cx<R> bracket = dk[k] * ep - (sgn_k * dk[k]) * em;
    const cx<R> term = bracket / lp;
    sum = k % 2 ? sum - term : sum + term;
    lp = lp * lam;
  }
  return sum.re;
}

template <class R>
std::vector<cx<R>> coefficients(const CoefficientSource& s, int N) {
  std::vector<cx<R>> a(N + 1);
  const R two_pi = 2 * mp::pi<R>();
  switch (s.kind()) {
    case CoefficientSource::Kind::Triangle: {
      const R th0(s.p1()), c(s.p2());
      a[0] = cx<R>(th0 * th0 / two_pi);
      for (int n = 1; n <= N; ++n) {
        const R rn(n);
        a[n] = ((1 - cos(rn * th0)) / (mp::pi<R>() * rn * rn)) * mp::expi<R>(-rn * c);
      }
      break;
    }
    case CoefficientSource::Kind::Kernel: {
      const cx<R> ub(R(s.u().real()), R(-s.u().imag()));
      cx<R> p(R(1));
      for (int n = 0; n <= N; ++n) {
        a[n] = p;
        p = p * ub;
      }
      break;
    }
    case CoefficientSource::Kind::PolyBump: {
      const R c(s.p1()), h(s.p2());
      for (int n = 0; n <= N; ++n) {
        const R rn(n);
        a[n] = (h * bump_integral<R>(s.power(), rn * h) / two_pi) * mp::expi<R>(-rn * c);
      }
      break;
    }
    case CoefficientSource::Kind::List:
      for (int n = 0; n <= N; ++n) a[n] = cx<R>::from(s.stored()[n]);
      break;
  }
  const cx<R> sc = cx<R>::from(s.scale());
  for (auto& v : a) v = v * sc;
  return a;
}

template <class R>
std::optional<RayleighResult> solve_tier(const BergmanDomain& dom, std::vector<cx<R>> b,
                                         int digits) {
  const int N = static_cast<int>(b.size()) - 1;
  mp::DomainFactors<R> f(dom, N);
  auto G = mp::gram(f);
  const std::vector<R> d = mp::unit_diagonal(G);
  if (!mp::cholesky(G)) return std::nullopt;
  RayleighResult r;
  r.condition = mp::condition_estimate(G);
  r.digits = digits;
  if (digits < std::log10(r.condition) + 20) return std::nullopt;
  for (int i = 0; i <= N; ++i) b[i] = b[i] / d[i];
  mp::forward_solve(G, b);
  R s(0);
  for (const auto& v : b) s += mp::norm(v);
  r.value = static_cast<double>(sqrt(s));
  return r;
}

// make<R>() yields the right-hand side b with value^2 = b^H G^{-1} b. The
// Cholesky-diagonal condition estimate undercounts on these Grams, so a tier is
// accepted only when the next one reproduces its value.
template <class Make>
RayleighResult escalate(const BergmanDomain& dom, Make make) {
  constexpr double kAgree = 1e-10;
  auto agree = [](const std::optional<RayleighResult>& a, const std::optional<RayleighResult>& b) {
    return a && b && std::abs(a->value - b->value) <= kAgree * std::abs(b->value);
  };
  auto r50 = solve_tier<mp::R50>(dom, make.template operator()<mp::R50>(), 50);
  auto r100 = solve_tier<mp::R100>(dom, make.template operator()<mp::R100>(), 100);
  if (agree(r50, r100)) return *r100;
  auto r200 = solve_tier<mp::R200>(dom, make.template operator()<mp::R200>(), 200);
  if (agree(r100, r200)) return *r200;
  auto r400 = solve_tier<mp::R400>(dom, make.template operator()<mp::R400>(), 400);
  if (agree(r200, r400)) return *r400;
  throw NumericalError("Gram factorization needs more than 400 digits at this order");
}

}  // namespace

HardyFunction CoefficientSource::to_hardy(int N) const {
  require(N >= 0, "order N must be nonnegative");
  const auto a = coefficients<mp::R50>(*this, N);
  std::vector<cplx> c(N + 1);
  for (int n = 0; n <= N; ++n) c[n] = a[n].to_double();
  return HardyFunction(std::move(c));
}

RayleighResult rayleigh_constant(const BergmanDomain& domain, const CoefficientSource& f, int N) {
  require(N >= 0, "order N must be nonnegative");
  return escalate(domain, [&]<class R>() {
    auto a = coefficients<R>(f, N);
    for (auto& v : a) v = mp::conj(v);
    return a;
  });
}

RayleighResult functional_norm(const BergmanDomain& domain, const std::vector<cplx>& l) {
  require(!l.empty(), "functional_norm: empty functional");
  return escalate(domain, [&]<class R>() {
    std::vector<cx<R>> b(l.size());
    for (size_t i = 0; i < l.size(); ++i) b[i] = cx<R>::from(l[i]);
    return b;
  });
}

RayleighResult observability_constant(const CoefficientSource& f0, const AnnularSector& exterior,
                                      int N) {
  require(exterior.side() == Side::Exterior, "observability needs an exterior sector");
  return rayleigh_constant(BergmanDomain::sector(exterior), f0, N);
}

RayleighResult reachability_constant(const CoefficientSource& fT, const AnnularSector& interior,
                                     int N) {
  require(interior.side() == Side::Interior, "reachability needs an interior sector");
  return rayleigh_constant(BergmanDomain::sector(interior), fT, N);
}

double observability_constant(const HardyFunction& f0, const AnnularSector& exterior, int N) {
  require(f0.nmax() <= N, "f0 must be truncated to degree <= N");
  std::vector<cplx> c(N + 1);
  for (int n = 0; n <= N; ++n) c[n] = f0[n];
  return observability_constant(CoefficientSource::list(HardyFunction(c)), exterior, N).value;
}

double reachability_constant(const HardyFunction& fT, const AnnularSector& interior, int N) {
  require(fT.nmax() <= N, "fT must be truncated to degree <= N");
  std::vector<cplx> c(N + 1);
  for (int n = 0; n <= N; ++n) c[n] = fT[n];
  return reachability_constant(CoefficientSource::list(HardyFunction(c)), interior, N).value;
}

// ------------------------------------------------------------- growth verdict

const char* to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::BoundedPlateau:
      return "bounded-plateau";
    case GrowthVerdict::Diverging:
      return "diverging";
    case GrowthVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

GrowthClassification classify_growth(const std::vector<double>& c, const std::vector<int>& orders,
                                     const GrowthThresholds& th) {
  require(c.size() >= 3, "classify_growth needs at least three constants");
  require(orders.empty() || orders.size() == c.size(), "orders and constants differ in length");
  GrowthClassification g;
  for (size_t k = 0; k + 1 < c.size(); ++k) {
    require(c[k] >= 0 && c[k + 1] >= 0, "constants must be nonnegative");
    double r;
    if (c[k] == 0.0)
      r = c[k + 1] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    else
      r = c[k + 1] / c[k];
    if (!orders.empty()) {
      require(orders[k] > 0 && orders[k + 1] > orders[k], "orders must increase");
      r = std::pow(r, 1.0 / std::log2(double(orders[k + 1]) / orders[k]));
    }
    g.ratios.push_back(r);
  }
  const double a = g.ratios[g.ratios.size() - 2], b = g.ratios.back();
  if (a < th.plateau && b < th.plateau)
    g.verdict = GrowthVerdict::BoundedPlateau;
  else if (a > th.diverging && b > th.diverging)
    g.verdict = GrowthVerdict::Diverging;
  return g;
}

std::string ObservabilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["state"] = state;
  j["convention"] = kConvention;
  j["sector"] = {{"side", to_string(side)}, {"T", T}, {"arc", {theta1, theta2}}};
  j["orders"] = orders;
  j["constants"] = constants;
  j["condition_numbers"] = conditions;
  j["digits"] = digits;
  j["ratios_per_doubling"] = growth.ratios;
  j["verdict"] = to_string(growth.verdict);
  return j.dump(2);
}

ObservabilityReport observability_report(const CoefficientSource& state, const AnnularSector& sector,
                                         const std::vector<int>& orders,
                                         const GrowthThresholds& th) {
  require(orders.size() >= 3, "a report needs at least three orders");
  ObservabilityReport rep;
  rep.kind = sector.side() == Side::Exterior ? "observability" : "reachability";
  rep.state = state.name();
  rep.side = sector.side();
  rep.T = sector.T();
  rep.theta1 = sector.arc().theta1();
  rep.theta2 = sector.arc().theta2();
  rep.orders = orders;
  for (int N : orders) {
    const RayleighResult r = rayleigh_constant(BergmanDomain::sector(sector), state, N);
    rep.constants.push_back(r.value);
    rep.conditions.push_back(r.condition);
    rep.digits.push_back(r.digits);
  }
  rep.growth = classify_growth(rep.constants, orders, th);
  return rep;
}

// ------------------------------------------------------------- cost vs time

CostSweep cost_vs_time_sweep(const HardyFunction& f0, const std::vector<double>& horizons,
                             const ArcInterval& arc, const CostSweepOptions& opt) {
  require(!horizons.empty(), "cost sweep needs at least one horizon");
  require(opt.target_residual > 0, "target residual must be positive");
  CostSweep sweep;
  SynthesisOptions so;
  so.steps = opt.steps;
  for (double T : horizons) {
    CostSweepRow row;
    row.horizon = T;
    try {
      require(T > 0, "horizon must be positive");
      auto run = [&](double le) {
        return synthesize_h2(f0, T, arc, opt.N, std::pow(10.0, le), so).report;
      };
      double lo = opt.log10_eps_min, hi = opt.log10_eps_max;
      SynthesisReport best = run(lo);
      if (best.residual > opt.target_residual) {
        row.epsilon = best.epsilon;
        row.residual = best.residual;
        row.control_norm = best.control_norm;
        row.error = "target residual not reached at the smallest eps";
      } else {
        for (int it = 0; it < opt.bisections; ++it) {
          const double mid = 0.5 * (lo + hi);
          const SynthesisReport r = run(mid);
          if (r.residual > opt.target_residual) {
            hi = mid;
          } else {
            lo = mid;
            best = r;
          }
        }
        row.epsilon = best.epsilon;
        row.residual = best.residual;
        row.control_norm = best.control_norm;
        row.ok = true;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    sweep.rows.push_back(row);
  }
  // Least-squares slope over horizons <= 1.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : sweep.rows) {
    if (!r.ok || r.horizon > 1.0 || r.control_norm <= 0) continue;
    const double x = std::log(r.horizon), y = std::log(r.control_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 0) {
    sweep.has_slope = true;
    sweep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return sweep;
}

std::string CostSweep::to_csv() const {
  std::string out = "T,epsilon,residual,control_norm,ok\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", r.horizon, r.epsilon, r.residual,
                  r.control_norm, r.ok ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace hh
