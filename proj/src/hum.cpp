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

#include "halfheat/hum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "quadrature.hpp"

namespace hh {

const char* to_string(ControlSystem s) { return s == ControlSystem::H2 ? "H2" : "L2"; }

std::vector<int> mode_range(ControlSystem s, int N) {
  require(N >= 0, "order N must be nonnegative");
  std::vector<int> m;
  for (int n = s == ControlSystem::H2 ? 0 : -N; n <= N; ++n) m.push_back(n);
  return m;
}

namespace {

double rho(int s, double T) { return s == 0 ? T : -std::expm1(-T * s) / s; }

// Cell average of e^{-a (T - s)} over [t0, t0 + dt].
double cell_weight(int a, double T, double t0, double dt) {
  if (a == 0) return 1.0;
  return std::exp(-a * (T - t0 - dt)) * (-std::expm1(-a * dt)) / (a * dt);
}

// W(j, k) = cell_weight(|modes[k]|, ...) for cell j.
Eigen::MatrixXd cell_weights(const std::vector<int>& modes, double T, int steps) {
  const double dt = T / steps;
  Eigen::MatrixXd W(steps, modes.size());
  for (int j = 0; j < steps; ++j)
    for (size_t k = 0; k < modes.size(); ++k)
      W(j, k) = cell_weight(std::abs(modes[k]), T, j * dt, dt);
  return W;
}

// A(a, b) = A^(modes[a] - modes[b]).
Eigen::MatrixXcd arc_gram(const std::vector<int>& modes, const ArcInterval& arc) {
  const int M = static_cast<int>(modes.size());
  Eigen::MatrixXcd A(M, M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) A(a, b) = arc.mean_exp(modes[a] - modes[b]);
  return A;
}

int index_of(const std::vector<int>& modes, int m) {
  auto it = std::find(modes.begin(), modes.end(), m);
  return it == modes.end() ? -1 : static_cast<int>(it - modes.begin());
}

}  // namespace

ControlGramian hum_gramian(double T, const ArcInterval& arc, ControlSystem system, int N) {
  require(T > 0, "hum_gramian: T must be positive");
  ControlGramian g;
  g.system = system;
  g.T = T;
  g.N = N;
  g.modes = mode_range(system, N);
  const int M = static_cast<int>(g.modes.size());
  g.entries.resize(M, M);
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k)
      g.entries(i, k) = rho(std::abs(g.modes[i]) + std::abs(g.modes[k]), T) *
                        arc.mean_exp(g.modes[k] - g.modes[i]);
  return g;
}

ControlGramian hum_gramian_discrete(double T, const ArcInterval& arc, ControlSystem system, int N,
                                    int steps) {
  require(T > 0, "hum_gramian: T must be positive");
  require(steps >= 1, "hum_gramian: steps must be positive");
  ControlGramian g;
  g.system = system;
  g.T = T;
  g.N = N;
  g.steps = steps;
  g.modes = mode_range(system, N);
  const Eigen::MatrixXd W = cell_weights(g.modes, T, steps);
  const Eigen::MatrixXd WW = (T / steps) * (W.transpose() * W);
  const int M = static_cast<int>(g.modes.size());
  g.entries.resize(M, M);
  for (int i = 0; i < M; ++i)
    for (int k = 0; k < M; ++k) g.entries(i, k) = WW(i, k) * arc.mean_exp(g.modes[k] - g.modes[i]);
  return g;
}

// ------------------------------------------------------------------ ControlField

ControlField::ControlField(double T, ArcInterval arc, std::vector<int> modes, int steps)
    : T_(T), arc_(arc), modes_(std::move(modes)) {
  require(T > 0, "ControlField: T must be positive");
  require(steps >= 1, "ControlField: steps must be positive");
  require(!modes_.empty(), "ControlField: empty mode range");
  c_ = Eigen::MatrixXcd::Zero(steps, modes_.size());
}

cplx ControlField::value(double t, double x) const {
  if (t < 0 || t > T_ || !arc_.contains(x)) return cplx(0);
  const int j = std::min(steps() - 1, static_cast<int>(std::floor(t / dt())));
  cplx s(0);
  for (size_t k = 0; k < modes_.size(); ++k) s += c_(j, k) * std::polar(1.0, modes_[k] * x);
  return s;
}

double ControlField::norm() const {
  const Eigen::MatrixXcd A = arc_gram(modes_, arc_);
  double s = 0;
  for (int j = 0; j < steps(); ++j) {
    const Eigen::RowVectorXcd r = c_.row(j);
    s += (r * A * r.adjoint())(0, 0).real();
  }
  return std::sqrt(std::max(0.0, s * dt()));
}

cplx ControlField::mean() const {
  cplx s(0);
  for (size_t k = 0; k < modes_.size(); ++k) s += c_.col(k).sum() * arc_.mean_exp(modes_[k]);
  return s * dt();
}

std::string ControlField::to_csv() const {
  std::string out = "t,mode,re,im\n";
  char buf[160];
  for (int j = 0; j < steps(); ++j)
    for (size_t k = 0; k < modes_.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g\n", j * dt(), modes_[k],
                    c_(j, k).real(), c_(j, k).imag());
      out += buf;
    }
  return out;
}

std::string SynthesisReport::to_json() const {
  nlohmann::ordered_json j;
  j["system"] = to_string(system);
  j["convention"] = kConvention;
  j["epsilon"] = epsilon;
  j["residual"] = residual;
  j["control_norm"] = control_norm;
  j["condition"] = condition;
  j["mean_residual"] = mean_residual;
  return j.dump(2);
}

// -------------------------------------------------------------------- simulate

std::vector<CircleFunction> simulate(const CircleFunction& f0, const ControlField& u, int steps) {
  const int J = u.steps();
  require(steps >= J && steps % J == 0, "simulate: steps must be a multiple of the control grid");
  const auto& modes = u.modes();
  const int M = static_cast<int>(modes.size());
  int nmax = 0;
  for (int m : modes) nmax = std::max(nmax, std::abs(m));
  // Forcing on state mode m: sum_n c_n A^(n - m).
  Eigen::MatrixXcd At(M, M);
  for (int k = 0; k < M; ++k)
    for (int i = 0; i < M; ++i) At(k, i) = u.arc().mean_exp(modes[k] - modes[i]);
  const Eigen::MatrixXcd F = u.coefficients() * At;
  const int sub = steps / J;
  const double h = u.T() / steps;
  std::vector<double> decay(M), gain(M);
  for (int i = 0; i < M; ++i) {
    const int a = std::abs(modes[i]);
    decay[i] = std::exp(-a * h);
    gain[i] = a == 0 ? h : -std::expm1(-a * h) / a;
  }
  Eigen::VectorXcd y(M);
  for (int i = 0; i < M; ++i) y(i) = f0[modes[i]];
  auto snapshot = [&]() {
    CircleFunction f(nmax);
    for (int i = 0; i < M; ++i) f.set(modes[i], y(i));
    return f;
  };
  std::vector<CircleFunction> traj;
  traj.reserve(steps + 1);
  traj.push_back(snapshot());
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < sub; ++s) {
      for (int i = 0; i < M; ++i) y(i) = decay[i] * y(i) + gain[i] * F(j, i);
      traj.push_back(snapshot());
    }
  return traj;
}

double mean_matching_check(const ControlField& u, const CircleFunction& f0) {
  return std::abs(u.mean() + f0[0]);
}

// ------------------------------------------------------------------ synthesis

namespace {

Synthesis synthesize(ControlSystem system, const CircleFunction& f0, double T,
                     const ArcInterval& arc, int N, double eps, const SynthesisOptions& opt) {
  require(T > 0, "synthesis: T must be positive");
  require(eps > 0 && std::isfinite(eps), "synthesis: eps must be positive");
  require(N >= 0, "synthesis: N must be nonnegative");
  require(opt.steps >= 1, "synthesis: steps must be positive");
  const ControlGramian G = hum_gramian_discrete(T, arc, system, N, opt.steps);
  const auto& modes = G.modes;
  const int M = static_cast<int>(modes.size());
  Eigen::VectorXcd rhs(M);
  double f0norm2 = 0;
  for (int i = 0; i < M; ++i) {
    rhs(i) = -std::exp(-std::abs(modes[i]) * T) * f0[modes[i]];
    f0norm2 += std::norm(f0[modes[i]]);
  }
  Eigen::MatrixXcd K = G.entries;
  for (int i = 0; i < M; ++i) K(i, i) += eps;
  if (opt.exact_mean) K(index_of(modes, 0), index_of(modes, 0)) -= eps;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
  const Eigen::VectorXcd g = lu.solve(rhs);
  if (!g.allFinite()) throw NumericalError("Gramian solve produced non-finite values");

  ControlField u(T, arc, modes, opt.steps);
  const Eigen::MatrixXd W = cell_weights(modes, T, opt.steps);
  for (int j = 0; j < opt.steps; ++j)
    for (int i = 0; i < M; ++i) u.coefficients()(j, i) = g(i) * W(j, i);

  const CircleFunction fT = simulate(f0, u, opt.steps).back();
  double res2 = 0;
  for (int m : modes) res2 += std::norm(fT[m]);

  SynthesisReport rep;
  rep.system = system;
  rep.epsilon = eps;
  rep.residual = f0norm2 > 0 ? std::sqrt(res2 / f0norm2) : std::sqrt(res2);
  rep.control_norm = u.norm();
  rep.condition = 1.0 / lu.rcond();
  rep.mean_residual = mean_matching_check(u, f0);
  return Synthesis{std::move(u), rep, fT, g};
}

}  // namespace

Synthesis synthesize_h2(const HardyFunction& f0, double T, const ArcInterval& arc, int N,
                        double eps, const SynthesisOptions& opt) {
  return synthesize(ControlSystem::H2, f0.to_circle(), T, arc, N, eps, opt);
}

Synthesis synthesize_l2(const CircleFunction& f0, double T, const ArcInterval& arc, int N,
                        double eps, const SynthesisOptions& opt) {
  return synthesize(ControlSystem::L2, f0, T, arc, N, eps, opt);
}

std::vector<SynthesisReport> epsilon_sweep(ControlSystem system, const CircleFunction& f0,
                                           double T, const ArcInterval& arc, int N,
                                           const std::vector<double>& eps,
                                           const SynthesisOptions& opt) {
  std::vector<SynthesisReport> out;
  for (double e : eps) out.push_back(synthesize(system, f0, T, arc, N, e, opt).report);
  return out;
}

ControlField kernel_perturbation(const ControlField& u, unsigned seed, double scale) {
  const int J = u.steps();
  const auto& modes = u.modes();
  int nmax = 0;
  for (int m : modes) nmax = std::max(nmax, std::abs(m));
  std::vector<int> rates(nmax + 1);
  for (int a = 0; a <= nmax; ++a) rates[a] = a;
  require(J > nmax + 1, "kernel_perturbation: time grid too coarse for a kernel");
  const Eigen::MatrixXd V = cell_weights(rates, u.T(), J);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(J, nmax + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ControlField w(u.T(), u.arc(), modes, J);
  for (size_t k = 0; k < modes.size(); ++k) {
    Eigen::VectorXd re(J), im(J);
    for (int j = 0; j < J; ++j) {
      re(j) = nd(rng);
      im(j) = nd(rng);
    }
    re -= Q * (Q.transpose() * re);
    im -= Q * (Q.transpose() * im);
    for (int j = 0; j < J; ++j) w.coefficients()(j, k) = cplx(re(j), im(j));
  }
  const double n = w.norm();
  if (n > 0) w.coefficients() *= scale / n;
  return w;
}

double minimality_defect(const ControlField& u, int samples, unsigned seed) {
  require(samples >= 1, "minimality_defect: samples must be positive");
  const double base = u.norm();
  const double scale = base > 0 ? 0.1 * base : 1.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    ControlField v = kernel_perturbation(u, seed + 7919u * s, scale);
    v.coefficients() += u.coefficients();
    worst = std::max(worst, base - v.norm());
  }
  return worst;
}

// -------------------------------------------------------- zero-mean splitting

namespace {

// Values of (1 - y^2) P_k(y) and its y-derivative for k = 0..N.
void bubble_legendre(double y, int N, std::vector<double>& val, std::vector<double>& der) {
  val.assign(N + 1, 0.0);
  der.assign(N + 1, 0.0);
  double p0 = 1.0, p1 = y, d0 = 0.0, d1 = 1.0;
  const double b = 1.0 - y * y, db = -2.0 * y;
  for (int k = 0; k <= N; ++k) {
    double p, d;
    if (k == 0) {
      p = 1.0;
      d = 0.0;
    } else if (k == 1) {
      p = y;
      d = 1.0;
    } else {
      p = ((2 * k - 1) * y * p1 - (k - 1) * p0) / k;
      d = d0 + (2 * k - 1) * p1;  // P'_k = P'_{k-2} + (2k-1) P_{k-1}
      p0 = p1;
      p1 = p;
      d0 = d1;
      d1 = d;
    }
    val[k] = b * p;
    der[k] = db * p + b * d;
  }
}

struct Families {
  // t families: 0 -> E a_k, 1 -> E a_k'. x families: 0 -> e^{-ix} b_l,
  // 1 -> e^{-ix} b_l', 2 -> e^{ix} b_l, 3 -> e^{ix} b_l'.
  std::array<Eigen::MatrixXd, 2> t;   // (points, N+1)
  std::array<Eigen::MatrixXcd, 4> x;  // (points, N+1)
};

Families eval_families(const std::vector<double>& ts, const std::vector<double>& xs, double T,
                       const ArcInterval& arc, int N) {
  Families f;
  const double L = arc.length();
  std::vector<double> v, d;
  for (auto& m : f.t) m.resize(ts.size(), N + 1);
  for (auto& m : f.x) m.resize(xs.size(), N + 1);
  for (size_t q = 0; q < ts.size(); ++q) {
    bubble_legendre(2.0 * ts[q] / T - 1.0, N, v, d);
    const double E = std::exp(-(T - ts[q]));
    for (int k = 0; k <= N; ++k) {
      f.t[0](q, k) = E * v[k];
      f.t[1](q, k) = E * d[k] * 2.0 / T;
    }
  }
  for (size_t q = 0; q < xs.size(); ++q) {
    bubble_legendre(2.0 * (xs[q] - arc.theta1()) / L - 1.0, N, v, d);
    const cplx em = std::polar(1.0, -xs[q]), ep = std::conj(em);
    for (int l = 0; l <= N; ++l) {
      f.x[0](q, l) = em * v[l];
      f.x[1](q, l) = em * d[l] * 2.0 / L;
      f.x[2](q, l) = ep * v[l];
      f.x[3](q, l) = ep * d[l] * 2.0 / L;
    }
  }
  return f;
}

// Column (k, l, kind): kind 0 -> conj(z) d_w phi, kind 1 -> z d_wbar phi.
// Each is a sum of two tensor terms alpha * T_f (x) X_g.
struct Term {
  cplx alpha;
  int tf, xf;
};
const std::array<std::array<Term, 2>, 2> kTerms = {{
    {{{cplx(0.5, 0), 1, 0}, {cplx(0, -0.5), 0, 1}}},
    {{{cplx(0.5, 0), 1, 2}, {cplx(0, 0.5), 0, 3}}},
}};

// Coefficient blocks P[kind] (N+1 x N+1) evaluated at points through families.
cplx eval_component(const Eigen::MatrixXcd& P, int kind, const Families& f, int it, int ix) {
  cplx s(0);
  for (const Term& tr : kTerms[kind]) {
    const Eigen::VectorXcd tv = f.t[tr.tf].row(it).transpose().cast<cplx>();
    const Eigen::VectorXcd xv = f.x[tr.xf].row(ix).transpose();
    s += tr.alpha * (tv.transpose() * P * xv)(0, 0);
  }
  return s;
}

}  // namespace

ZeroMeanDecomposition decompose_zero_mean(const std::function<cplx(double, double)>& v, double T,
                                          const ArcInterval& arc, int N) {
  require(T > 0, "decompose_zero_mean: T must be positive");
  require(N >= 1, "decompose_zero_mean: N must be positive");
  const int Q = 2 * N + 8;
  const QuadratureRule rt = gauss_legendre(Q, 0.0, T);
  const QuadratureRule rx = gauss_legendre(Q, arc.theta1(), arc.theta2());
  Eigen::VectorXd wt = Eigen::Map<const Eigen::VectorXd>(rt.weights.data(), Q);
  Eigen::VectorXd wx = Eigen::Map<const Eigen::VectorXd>(rx.weights.data(), Q) / kTwoPi;

  Eigen::MatrixXcd V(Q, Q);
  for (int i = 0; i < Q; ++i)
    for (int j = 0; j < Q; ++j) V(i, j) = v(rt.nodes[i], rx.nodes[j]);
  const double vnorm = std::sqrt((wt.transpose() * V.cwiseAbs2() * wx)(0, 0));
  const cplx vmean = (wt.transpose().cast<cplx>() * V * wx.cast<cplx>())(0, 0);
  const double area = T * arc.length() / kTwoPi;

  ZeroMeanDecomposition out;
  out.N = N;
  out.columns = 2 * (N + 1) * (N + 1);
  out.v1 = [](double, double) { return cplx(0); };
  out.v2 = out.v1;
  if (vnorm == 0.0) return out;
  require(std::abs(vmean) <= 1e-8 * vnorm * std::sqrt(area),
          "decompose_zero_mean: v must have zero space-time mean");

  const Families f = eval_families(rt.nodes, rx.nodes, T, arc, N);
  const int B = N + 1, C = out.columns;
  // 1-D Grams.
  std::array<std::array<Eigen::MatrixXd, 2>, 2> Gt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) Gt[a][b] = f.t[a].transpose() * wt.asDiagonal() * f.t[b];
  std::array<std::array<Eigen::MatrixXcd, 4>, 4> Gx;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) Gx[a][b] = f.x[a].adjoint() * wx.asDiagonal() * f.x[b];
  // Column index: kind * B*B + k * B + l.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(C, C);
  for (int c1 = 0; c1 < C; ++c1) {
    const int kind1 = c1 / (B * B), k1 = (c1 / B) % B, l1 = c1 % B;
    for (int c2 = 0; c2 < C; ++c2) {
      const int kind2 = c2 / (B * B), k2 = (c2 / B) % B, l2 = c2 % B;
      cplx s(0);
      for (const Term& a : kTerms[kind1])
        for (const Term& b : kTerms[kind2])
          s += std::conj(a.alpha) * b.alpha * Gt[a.tf][b.tf](k1, k2) * Gx[a.xf][b.xf](l1, l2);
      H(c1, c2) = s;
    }
  }
  // Right-hand side.
  Eigen::VectorXcd rhs(C);
  {
    std::array<Eigen::MatrixXcd, 2> Vt;  // (N+1, Q): sum_t w_t T_f(t) v(t, x)
    for (int a = 0; a < 2; ++a) Vt[a] = f.t[a].transpose().cast<cplx>() * wt.asDiagonal() * V;
    for (int c = 0; c < C; ++c) {
      const int kind = c / (B * B), k = (c / B) % B, l = c % B;
      cplx s(0);
      for (const Term& tr : kTerms[kind]) {
        cplx acc(0);
        for (int q = 0; q < Q; ++q) acc += wx(q) * std::conj(f.x[tr.xf](q, l)) * Vt[tr.tf](k, q);
        s += std::conj(tr.alpha) * acc;
      }
      rhs(c) = s;
    }
  }
  const Eigen::VectorXd d = H.diagonal().real().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd Hs = d.asDiagonal() * H * d.asDiagonal();
  Hs.diagonal().array() += 1e-13;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(Hs);
  if (ldlt.info() != Eigen::Success) throw NumericalError("decompose_zero_mean: factorization failed");
  const Eigen::VectorXcd coef = d.asDiagonal() * ldlt.solve(d.asDiagonal() * rhs);
  const Eigen::VectorXd D = ldlt.vectorD().real().cwiseAbs();
  const double dmax = D.maxCoeff();
  out.rank = static_cast<int>((D.array() > 1e-12 * dmax).count());

  std::array<Eigen::MatrixXcd, 2> P;
  for (int kind = 0; kind < 2; ++kind) {
    P[kind].resize(B, B);
    for (int k = 0; k < B; ++k)
      for (int l = 0; l < B; ++l) P[kind](k, l) = coef(kind * B * B + k * B + l);
  }
  // Residual on the quadrature grid.
  Eigen::MatrixXcd R = V;
  for (int kind = 0; kind < 2; ++kind)
    for (const Term& tr : kTerms[kind])
      R -= tr.alpha * (f.t[tr.tf].cast<cplx>() * P[kind] * f.x[tr.xf].transpose());
  out.residual = std::sqrt((wt.transpose() * R.cwiseAbs2() * wx)(0, 0)) / vnorm;

  auto make = [T, arc, N](Eigen::MatrixXcd Pk, int kind) {
    return [T, arc, N, Pk = std::move(Pk), kind](double t, double x) {
      const Families fp = eval_families({t}, {x}, T, arc, N);
      return eval_component(Pk, kind, fp, 0, 0);
    };
  };
  out.v1 = make(P[0], 0);
  out.v2 = make(P[1], 1);
  return out;
}

ZeroMeanDecomposition decompose_zero_mean(const ControlField& v, int N) {
  return decompose_zero_mean([&v](double t, double x) { return v.value(t, x); }, v.T(), v.arc(), N);
}

}  // namespace hh
