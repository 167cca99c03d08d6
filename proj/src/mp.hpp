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

// Extended-precision dense Hermitian algebra for the ill-conditioned
// monomial Grams on annular sectors.

#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <vector>

#include "halfheat/common.hpp"

namespace hh::mp {

template <unsigned Digits>
using real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                           boost::multiprecision::et_off>;

using R50 = real<50>;
using R100 = real<100>;
using R200 = real<200>;
using R400 = real<400>;

template <class R>
struct cx {
  R re{0}, im{0};
  cx() = default;
  cx(R r, R i = R(0)) : re(std::move(r)), im(std::move(i)) {}
  template <class S>
  static cx from(const cx<S>& o) {
    return cx(static_cast<R>(o.re), static_cast<R>(o.im));
  }
  static cx from(cplx v) { return cx(R(v.real()), R(v.imag())); }
  cplx to_double() const { return cplx(static_cast<double>(re), static_cast<double>(im)); }

  cx& operator+=(const cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  cx& operator-=(const cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend cx operator+(cx a, const cx& b) { return a += b; }
  friend cx operator-(cx a, const cx& b) { return a -= b; }
  friend cx operator-(const cx& a) { return cx(-a.re, -a.im); }
  friend cx operator*(const cx& a, const cx& b) {
    return cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend cx operator*(const R& s, const cx& a) { return cx(s * a.re, s * a.im); }
  friend cx operator/(const cx& a, const R& s) { return cx(a.re / s, a.im / s); }
  friend cx operator/(const cx& a, const cx& b) {
    const R d = b.re * b.re + b.im * b.im;
    return cx((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
  }
};

template <class R>
cx<R> conj(const cx<R>& a) {
  return cx<R>(a.re, -a.im);
}
template <class R>
R norm(const cx<R>& a) {
  return a.re * a.re + a.im * a.im;
}
template <class R>
cx<R> expi(const R& t) {
  return cx<R>(cos(t), sin(t));
}

template <class R>
R pi() {
  return boost::math::constants::pi<R>();
}

// Row-major dense square matrix.
template <class T>
struct Dense {
  int n = 0;
  std::vector<T> a;
  Dense() = default;
  explicit Dense(int size) : n(size), a(size_t(size) * size) {}
  T& operator()(int i, int j) { return a[size_t(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[size_t(i) * n + j]; }
};

// In-place lower Cholesky A = L L^H of a Hermitian matrix (lower triangle
// read). Returns false on a non-positive pivot.
template <class R>
bool cholesky(Dense<cx<R>>& A) {
  const int n = A.n;
  for (int j = 0; j < n; ++j) {
    R d = A(j, j).re;
    for (int k = 0; k < j; ++k) d -= norm(A(j, k));
    if (!(d > 0)) return false;
    const R ljj = sqrt(d);
    A(j, j) = cx<R>(ljj);
    for (int i = j + 1; i < n; ++i) {
      cx<R> s = A(i, j);
      for (int k = 0; k < j; ++k) s -= A(i, k) * conj(A(j, k));
      A(i, j) = s / ljj;
    }
    for (int i = 0; i < j; ++i) A(i, j) = cx<R>();
  }
  return true;
}

// Solves L y = b in place (L lower triangular).
template <class R>
void forward_solve(const Dense<cx<R>>& L, std::vector<cx<R>>& b) {
  for (int i = 0; i < L.n; ++i) {
    cx<R> s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * b[k];
    b[i] = s / L(i, i).re;
  }
}

// (max L_ii / min L_ii)^2, a cheap lower estimate of the spectral condition.
template <class R>
double condition_estimate(const Dense<cx<R>>& L) {
  R lo = L(0, 0).re, hi = lo;
  for (int i = 1; i < L.n; ++i) {
    if (L(i, i).re < lo) lo = L(i, i).re;
    if (L(i, i).re > hi) hi = L(i, i).re;
  }
  const R r = hi / lo;
  return static_cast<double>(r * r);
}

// Scales a Hermitian positive matrix to unit diagonal; returns the scales
// sqrt(A_ii).
template <class R>
std::vector<R> unit_diagonal(Dense<cx<R>>& A) {
  std::vector<R> d(A.n);
  for (int i = 0; i < A.n; ++i) d[i] = sqrt(A(i, i).re);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) A(i, j) = A(i, j) / (d[i] * d[j]);
  return d;
}

}  // namespace hh::mp
