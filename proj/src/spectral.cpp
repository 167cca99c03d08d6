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

#include "halfheat/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hh {

const char* to_string(Trend t) {
  switch (t) {
    case Trend::Convergent:
      return "convergent";
    case Trend::Divergent:
      return "divergent trend";
    case Trend::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ArcInterval::ArcInterval(double theta1, double theta2) : t1_(theta1), t2_(theta2) {
  require(std::isfinite(theta1) && std::isfinite(theta2), "arc endpoints must be finite");
  require(theta2 > theta1, "arc requires theta2 > theta1");
  require(theta2 - theta1 < kTwoPi, "arc must be a strict sub-arc (length < 2pi)");
}

double ArcInterval::reduce(double t) const {
  double r = std::fmod(t - t1_, kTwoPi);
  if (r < 0) r += kTwoPi;
  return t1_ + r;
}

cplx ArcInterval::mean_exp(int d) const {
  if (d == 0) return cplx(length() / kTwoPi, 0.0);
  // (e^{i d t2} - e^{i d t1}) / (i d), written to avoid cancellation for
  // short arcs: 2 sin(d L / 2) / d * e^{i d c}.
  const double half = 0.5 * d * length();
  return std::polar(2.0 * std::sin(half) / d, d * center()) / kTwoPi;
}

// ---------------------------------------------------------------- CircleFunction

CircleFunction::CircleFunction(int nmax) : nmax_(nmax), c_(2 * nmax + 1, cplx(0)) {
  require(nmax >= 0, "CircleFunction: nmax must be nonnegative");
}

CircleFunction::CircleFunction(int nmax, std::vector<cplx> coeffs)
    : nmax_(nmax), c_(std::move(coeffs)) {
  require(nmax >= 0, "CircleFunction: nmax must be nonnegative");
  require(c_.size() == static_cast<size_t>(2 * nmax + 1),
          "CircleFunction: expected 2*nmax+1 coefficients");
}

cplx CircleFunction::operator[](int n) const {
  if (n < -nmax_ || n > nmax_) return cplx(0);
  return c_[n + nmax_];
}

void CircleFunction::set(int n, cplx v) {
  require(n >= -nmax_ && n <= nmax_, "CircleFunction::set: mode out of range");
  c_[n + nmax_] = v;
}

cplx CircleFunction::evaluate(double theta) const {
  cplx s(0);
  for (int n = -nmax_; n <= nmax_; ++n) s += c_[n + nmax_] * std::polar(1.0, n * theta);
  return s;
}

std::vector<cplx> CircleFunction::sample(int count) const {
  require(count > 0, "sample count must be positive");
  std::vector<cplx> out(count);
  for (int j = 0; j < count; ++j) out[j] = evaluate(kTwoPi * j / count);
  return out;
}

double CircleFunction::l2_norm() const {
  double s = 0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

CircleFunction CircleFunction::conj() const {
  CircleFunction out(nmax_);
  for (int n = -nmax_; n <= nmax_; ++n) out.set(n, std::conj((*this)[-n]));
  return out;
}

bool CircleFunction::is_real(double tol) const {
  for (int n = 0; n <= nmax_; ++n)
    if (std::abs((*this)[-n] - std::conj((*this)[n])) > tol) return false;
  return true;
}

CircleFunction CircleFunction::truncated(int nmax) const {
  CircleFunction out(nmax);
  for (int n = -nmax; n <= nmax; ++n) out.set(n, (*this)[n]);
  return out;
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& o) {
  if (o.nmax_ > nmax_) *this = truncated(o.nmax_);
  for (int n = -o.nmax_; n <= o.nmax_; ++n) c_[n + nmax_] += o[n];
  return *this;
}

CircleFunction& CircleFunction::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

CircleFunction operator+(CircleFunction a, const CircleFunction& b) { return a += b; }
CircleFunction operator-(CircleFunction a, const CircleFunction& b) {
  return a += (cplx(-1) * b);
}
CircleFunction operator*(cplx s, CircleFunction f) { return f *= s; }

// ----------------------------------------------------------------- HardyFunction

HardyFunction::HardyFunction(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(cplx(0));
}

cplx HardyFunction::operator[](int n) const {
  if (n < 0 || n > nmax()) return cplx(0);
  return c_[n];
}

CircleFunction HardyFunction::to_circle() const {
  CircleFunction out(nmax());
  for (int n = 0; n <= nmax(); ++n) out.set(n, c_[n]);
  return out;
}

cplx HardyFunction::evaluate(cplx z) const {
  cplx s(0);
  for (int n = nmax(); n >= 0; --n) s = s * z + c_[n];
  return s;
}

double HardyFunction::l2_norm() const {
  double s = 0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

cplx inner(const CircleFunction& f, const CircleFunction& g) {
  const int m = std::min(f.nmax(), g.nmax());
  cplx s(0);
  for (int n = -m; n <= m; ++n) s += f[n] * std::conj(g[n]);
  return s;
}

HardyFunction riesz_project(const CircleFunction& f) {
  std::vector<cplx> c(f.nmax() + 1);
  for (int n = 0; n <= f.nmax(); ++n) c[n] = f[n];
  return HardyFunction(std::move(c));
}

CircleFunction semigroup_apply(const CircleFunction& f, double t) {
  require(t >= 0, "semigroup_apply: t must be nonnegative");
  CircleFunction out(f.nmax());
  for (int n = -f.nmax(); n <= f.nmax(); ++n) out.set(n, std::exp(-std::abs(n) * t) * f[n]);
  return out;
}

HardyFunction semigroup_apply(const HardyFunction& f, double t) {
  require(t >= 0, "semigroup_apply: t must be nonnegative");
  std::vector<cplx> c(f.nmax() + 1);
  for (int n = 0; n <= f.nmax(); ++n) c[n] = std::exp(-n * t) * f[n];
  return HardyFunction(std::move(c));
}

double sobolev_norm(const CircleFunction& f, double s) {
  require(s >= 0, "sobolev_norm: order must be nonnegative");
  double acc = 0;
  for (int n = -f.nmax(); n <= f.nmax(); ++n)
    acc += std::pow(1.0 + double(n) * n, s) * std::norm(f[n]);
  return std::sqrt(acc);
}

CircleFunction coefficients_trapezoid(const std::function<cplx(double)>& f, int nmax, int k) {
  require(k >= 1 && k <= 26, "quadrature exponent k out of range");
  const int m = 1 << k;
  require(2 * nmax + 1 <= m, "too many modes for the sample count");
  fftw_complex* buf = fftw_alloc_complex(m);
  for (int j = 0; j < m; ++j) {
    const cplx v = f(kTwoPi * j / m);
    buf[j][0] = v.real();
    buf[j][1] = v.imag();
  }
  fftw_plan plan = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  CircleFunction out(nmax);
  for (int n = -nmax; n <= nmax; ++n) {
    const int idx = n >= 0 ? n : m + n;
    out.set(n, cplx(buf[idx][0], buf[idx][1]) / double(m));
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  return out;
}

// ------------------------------------------------------------------- tail fits

Trend classify_increments(const std::vector<double>& inc, double total, const TailThresholds& th) {
  if (inc.size() < 3) return Trend::Inconclusive;
  const double a = inc[inc.size() - 3], b = inc[inc.size() - 2], c = inc.back();
  const double floor = 1e-13 * std::max(std::abs(total), std::numeric_limits<double>::min());
  if (total == 0.0 || (b <= floor && c <= floor)) return Trend::Convergent;
  if (a <= 0.0 || b <= 0.0) return c <= floor ? Trend::Convergent : Trend::Inconclusive;
  const double r1 = b / a, r2 = c / b;
  if (r1 <= th.convergent_ratio && r2 <= th.convergent_ratio) return Trend::Convergent;
  if (r1 >= th.divergent_ratio && r2 >= th.divergent_ratio) return Trend::Divergent;
  return Trend::Inconclusive;
}

TailReport tail_report(const std::vector<double>& terms, const TailThresholds& th) {
  TailReport rep;
  for (double t : terms) rep.value += t;
  const size_t len = terms.size();
  for (size_t lo = 1; 2 * lo - 1 <= len; lo *= 2) {
    double s = 0;
    for (size_t n = lo; n < 2 * lo; ++n) s += terms[n - 1];
    rep.block_sums.push_back(s);
  }
  rep.trend = classify_increments(rep.block_sums, rep.value, th);
  const auto& b = rep.block_sums;
  if (rep.trend == Trend::Divergent) {
    rep.tail_estimate = std::numeric_limits<double>::infinity();
  } else if (b.size() >= 2 && b[b.size() - 2] > 0) {
    const double r = b.back() / b[b.size() - 2];
    rep.tail_estimate =
        r < 1 ? b.back() * r / (1 - r) : std::numeric_limits<double>::infinity();
  }
  return rep;
}

TailReport dirichlet_tail_norm(const CircleFunction& g) {
  std::vector<double> terms(g.nmax());
  for (int n = 1; n <= g.nmax(); ++n) terms[n - 1] = n * std::norm(g[-n]);
  return tail_report(terms);
}

TailReport sobolev_tail(const CircleFunction& f, double s) {
  std::vector<double> terms(f.nmax());
  for (int n = 1; n <= f.nmax(); ++n)
    terms[n - 1] = std::pow(1.0 + double(n) * n, s) * (std::norm(f[n]) + std::norm(f[-n]));
  TailReport rep = tail_report(terms);
  rep.value += std::norm(f[0]);
  return rep;
}

// ------------------------------------------------------------------- triangle

double triangle_profile(double theta0, double center, double t) {
  double r = std::remainder(t - center, kTwoPi);
  return std::max(0.0, theta0 - std::abs(r));
}

cplx triangle_coefficient(double theta0, double center, int n) {
  if (n == 0) return cplx(theta0 * theta0 / kTwoPi, 0.0);
  const double dn = n;
  return std::polar((1.0 - std::cos(dn * theta0)) / (kPi * dn * dn), -dn * center);
}

CircleFunction triangle_function(double theta0, int nmax, int k, double center) {
  require(theta0 > 0 && theta0 < kPi, "triangle_function: theta0 must lie in (0, pi)");
  CircleFunction f = coefficients_trapezoid(
      [&](double t) { return cplx(triangle_profile(theta0, center, t), 0.0); }, nmax, k);
  // Exact conjugate symmetry of a real profile; removes FFT rounding asymmetry.
  for (int n = 1; n <= nmax; ++n) {
    const cplx avg = 0.5 * (f[n] + std::conj(f[-n]));
    f.set(n, avg);
    f.set(-n, std::conj(avg));
  }
  f.set(0, cplx(f[0].real(), 0.0));
  return f;
}

// --------------------------------------------------------------------- dilog

namespace {

// B_n / (n+1)! for n = 0, 1, 2, 4, ..., 30 (odd n > 1 vanish).
struct BernoulliTable {
  std::array<double, 32> c{};
  BernoulliTable() {
    const std::array<std::pair<int, long double>, 17> b = {{{0, 1.0L},
                                                            {1, -0.5L},
                                                            {2, 1.0L / 6},
                                                            {4, -1.0L / 30},
                                                            {6, 1.0L / 42},
                                                            {8, -1.0L / 30},
                                                            {10, 5.0L / 66},
                                                            {12, -691.0L / 2730},
                                                            {14, 7.0L / 6},
                                                            {16, -3617.0L / 510},
                                                            {18, 43867.0L / 798},
                                                            {20, -174611.0L / 330},
                                                            {22, 854513.0L / 138},
                                                            {24, -236364091.0L / 2730},
                                                            {26, 8553103.0L / 6},
                                                            {28, -23749461029.0L / 870},
                                                            {30, 8615841276005.0L / 14322}}};
    for (const auto& [n, bn] : b) {
      long double f = 1;
      for (int j = 2; j <= n + 1; ++j) f *= j;
      c[n] = static_cast<double>(bn / f);
    }
  }
};

// Li_2(z) = sum_n B_n u^{n+1}/(n+1)!, u = -log(1-z); used for Re z <= 1/2.
cplx dilog_bernoulli(cplx z) {
  static const BernoulliTable tab;
  const cplx u = -std::log(1.0 - z);
  const cplx u2 = u * u;
  cplx sum = u + tab.c[1] * u2;
  cplx p = u * u2;  // u^{n+1} for n = 2
  for (int n = 2; n <= 30; n += 2) {
    sum += tab.c[n] * p;
    p *= u2;
  }
  return sum;
}

}  // namespace

cplx dilog(cplx z) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "dilog: non-finite argument");
  require(std::abs(z) <= 1.0 + 4 * std::numeric_limits<double>::epsilon(),
          "dilog: |z| > 1 is outside the series domain");
  constexpr double zeta2 = kPi * kPi / 6;
  if (z == cplx(1.0, 0.0)) return cplx(zeta2, 0.0);
  if (z == cplx(0.0, 0.0)) return cplx(0.0);
  if (z.real() <= 0.5) return dilog_bernoulli(z);
  // Reflection Li(z) = pi^2/6 - log z log(1-z) - Li(1-z); |1-z| < 1 here.
  const cplx w = 1.0 - z;
  return zeta2 - std::log(z) * std::log(w) - dilog_bernoulli(w);
}

cplx cauchy_transform(const CircleFunction& g, cplx z) {
  const double r = std::abs(z);
  require(std::isfinite(r), "cauchy_transform: non-finite argument");
  require(r != 1.0, "cauchy_transform: |z| = 1 is not in the domain");
  cplx s(0);
  if (r < 1.0) {
    for (int n = g.nmax(); n >= 0; --n) s = s * z + g[n];
    return s;
  }
  const cplx w = 1.0 / z;
  for (int n = g.nmax(); n >= 1; --n) s = (s + g[-n]) * w;
  return -s;
}

}  // namespace hh
