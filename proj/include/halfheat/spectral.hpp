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
#include <vector>

#include "halfheat/common.hpp"

namespace hh {

// Open arc {e^{it} : theta1 < t < theta2} with 0 < theta2 - theta1 < 2pi.
class ArcInterval {
 public:
  ArcInterval(double theta1, double theta2);

  double theta1() const { return t1_; }
  double theta2() const { return t2_; }
  double length() const { return t2_ - t1_; }
  double center() const { return 0.5 * (t1_ + t2_); }
  cplx zeta1() const { return std::polar(1.0, t1_); }
  cplx zeta2() const { return std::polar(1.0, t2_); }

  // Angle reduced into [theta1, theta1 + 2pi).
  double reduce(double t) const;
  bool contains(double t) const { return reduce(t) < t2_ && reduce(t) > t1_; }
  bool contains_closed(double t) const { return reduce(t) <= t2_; }

  // (1/2pi) int_omega e^{i d x} dx.
  cplx mean_exp(int d) const;
  // int_omega e^{i d x} dx.
  cplx integral_exp(int d) const { return kTwoPi * mean_exp(d); }

 private:
  double t1_, t2_;
};

class HardyFunction;

// Two-sided truncated Fourier series on the unit circle, modes -nmax..nmax.
class CircleFunction {
 public:
  CircleFunction() = default;
  explicit CircleFunction(int nmax);
  CircleFunction(int nmax, std::vector<cplx> coeffs);

  int nmax() const { return nmax_; }
  // Zero outside the stored range.
  cplx operator[](int n) const;
  void set(int n, cplx v);
  const std::vector<cplx>& data() const { return c_; }

  // f(e^{i theta}) by direct summation.
  cplx evaluate(double theta) const;
  std::vector<cplx> sample(int count) const;

  double l2_norm() const;
  CircleFunction conj() const;
  bool is_real(double tol = 1e-14) const;
  CircleFunction truncated(int nmax) const;

  CircleFunction& operator+=(const CircleFunction& o);
  CircleFunction& operator*=(cplx s);

 private:
  int nmax_ = 0;
  std::vector<cplx> c_{cplx(0)};
};

CircleFunction operator+(CircleFunction a, const CircleFunction& b);
CircleFunction operator-(CircleFunction a, const CircleFunction& b);
CircleFunction operator*(cplx s, CircleFunction f);

// Nonnegative modes 0..nmax only.
class HardyFunction {
 public:
  HardyFunction() = default;
  explicit HardyFunction(std::vector<cplx> coeffs);

  int nmax() const { return static_cast<int>(c_.size()) - 1; }
  cplx operator[](int n) const;
  const std::vector<cplx>& data() const { return c_; }

  CircleFunction to_circle() const;
  // Power series sum_n a_n z^n.
  cplx evaluate(cplx z) const;
  double l2_norm() const;

 private:
  std::vector<cplx> c_{cplx(0)};
};

cplx inner(const CircleFunction& f, const CircleFunction& g);

HardyFunction riesz_project(const CircleFunction& f);

// S(t): multiplies mode n by e^{-|n| t}.
CircleFunction semigroup_apply(const CircleFunction& f, double t);
HardyFunction semigroup_apply(const HardyFunction& f, double t);

double sobolev_norm(const CircleFunction& f, double s);

// Coefficients (1/2pi) int f(t) e^{-int} dt by the trapezoid rule on 2^k
// samples over [0, 2pi).
CircleFunction coefficients_trapezoid(const std::function<cplx(double)>& f, int nmax, int k);

// Series tail diagnosis from dyadic block sums of nonnegative terms.
struct TailReport {
  double value = 0.0;          // partial sum over stored modes
  double tail_estimate = 0.0;  // geometric extrapolation of the block sums
  Trend trend = Trend::Inconclusive;
  std::vector<double> block_sums;  // block j covers 2^j <= |n| < 2^{j+1}
};

struct TailThresholds {
  double convergent_ratio = 0.75;
  double divergent_ratio = 0.9;
};

// Trend of a sequence of nonnegative increments: convergent when the last two
// successive ratios are <= convergent_ratio (or the increments vanish against
// the running total), divergent when both are >= divergent_ratio.
Trend classify_increments(const std::vector<double>& increments, double total,
                          const TailThresholds& th = {});

// terms[n-1] is the n-th term, n >= 1.
TailReport tail_report(const std::vector<double>& terms, const TailThresholds& th = {});

// sum_{n<0} |n| |g^(n)|^2.
TailReport dirichlet_tail_norm(const CircleFunction& g);
// sum_n (1+n^2)^s |f^(n)|^2 split into dyadic blocks of |n|.
TailReport sobolev_tail(const CircleFunction& f, double s);

// Piecewise-linear bump of height theta0 and half-width theta0 centred at
// `center`, coefficients by trapezoid quadrature on 2^k samples.
CircleFunction triangle_function(double theta0, int nmax, int k = 12, double center = 0.0);
double triangle_profile(double theta0, double center, double t);
cplx triangle_coefficient(double theta0, double center, int n);

// Li_2(z) = sum_{n>0} z^n / n^2 for |z| <= 1.
cplx dilog(cplx z);

// Inside the disk: sum_{n>=0} g^(n) z^n; outside: -sum_{n>0} g^(-n) z^{-n}.
cplx cauchy_transform(const CircleFunction& g, cplx z);

}  // namespace hh
