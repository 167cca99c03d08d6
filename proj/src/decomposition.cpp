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

#include "halfheat/decomposition.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>

#include "json.hpp"
#include "quadrature.hpp"
#include "sector_mp.hpp"

namespace hh {

// ---------------------------------------------------------------- shapes

Shape Shape::disk(cplx center, double radius) {
  require(radius > 0, "disk radius must be positive");
  Shape s;
  s.kind_ = Kind::Disk;
  s.center_ = center;
  s.radius_ = radius;
  return s;
}

Shape Shape::sector(const AnnularSector& sec) {
  Shape s;
  s.kind_ = Kind::Sector;
  s.sector_ = std::make_shared<const AnnularSector>(sec);
  return s;
}

Shape Shape::unite(const Shape& a, const Shape& b) {
  Shape s;
  s.kind_ = Kind::Union;
  s.a_ = std::make_shared<const Shape>(a);
  s.b_ = std::make_shared<const Shape>(b);
  return s;
}

bool Shape::contains(cplx z) const {
  switch (kind_) {
    case Kind::Disk:
      return std::abs(z - center_) < radius_;
    case Kind::Sector:
      return sector_->contains(z / scale_);
    default:
      return a_->contains(z) || b_->contains(z);
  }
}

Shape Shape::scaled(double lambda) const {
  require(lambda > 0, "scale must be positive");
  Shape s = *this;
  switch (kind_) {
    case Kind::Disk:
      s.center_ *= lambda;
      s.radius_ *= lambda;
      break;
    case Kind::Sector:
      s.scale_ *= lambda;
      break;
    default:
      s.a_ = std::make_shared<const Shape>(a_->scaled(lambda));
      s.b_ = std::make_shared<const Shape>(b_->scaled(lambda));
  }
  return s;
}

Grid Grid::square(cplx lo, double side, int n) {
  require(side > 0 && n >= 4, "grid needs a positive side and at least 4 cells");
  return Grid{lo, side / n, n, n};
}

void GridField::export_binary(const std::string& base) const {
  require(values.size() == grid.size(), "grid field size mismatch");
  {
    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("cannot open " + base + ".bin");
    for (const cplx& v : values) {
      const double re = v.real(), im = v.imag();
      bin.write(reinterpret_cast<const char*>(&re), sizeof re);
      bin.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }
  nlohmann::ordered_json j;
  j["file"] = base + ".bin";
  j["dtype"] = "float64";
  j["endianness"] = "little";
  j["layout"] = "complex interleaved, index = j * nx + i";
  j["nx"] = grid.nx;
  j["ny"] = grid.ny;
  j["h"] = grid.h;
  j["x0"] = grid.lo.real() + 0.5 * grid.h;
  j["y0"] = grid.lo.imag() + 0.5 * grid.h;
  std::ofstream js(base + ".json");
  if (!js) throw ValidationError("cannot open " + base + ".json");
  js << j.dump(2) << "\n";
}

std::vector<uint8_t> rasterize(const Shape& s, const Grid& g) {
  std::vector<uint8_t> m(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m[g.index(i, j)] = s.contains(g.point(i, j)) ? 1 : 0;
  return m;
}

namespace {

// Lower envelope of parabolas: out[q] = min_p (q - p)^2 + f[p].
void edt_1d(const std::vector<double>& f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    while (k >= 0) {
      const double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
    }
  }
  out.assign(n, inf);
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    out[q] = double(q - v[j]) * (q - v[j]) + f[v[j]];
  }
}

}  // namespace

std::vector<double> distance_to(const std::vector<uint8_t>& mask, const Grid& g) {
  require(mask.size() == g.size(), "mask size mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d2(g.size());
  std::vector<double> col(g.ny), out;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) col[j] = mask[g.index(i, j)] ? 0.0 : inf;
    edt_1d(col, out);
    for (int j = 0; j < g.ny; ++j) d2[g.index(i, j)] = out[j];
  }
  std::vector<double> row(g.nx);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) row[i] = d2[g.index(i, j)];
    edt_1d(row, out);
    for (int i = 0; i < g.nx; ++i) d2[g.index(i, j)] = std::sqrt(out[i]) * g.h;
  }
  return d2;
}

// ---------------------------------------------------------------- cutoff

namespace {

double psi_step(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double psi_slope(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t), db = -b / ((1 - t) * (1 - t));
  return (da * b - a * db) / ((a + b) * (a + b));
}

double mollifier(double r) { return r < 1 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

// int |w| rho(w) dA / int rho(w) dA over the unit disk.
double mollifier_first_moment() {
  const QuadratureRule q = composite_rule(graded_panels(0.0, 1.0, 0.05, 0, 0), 20);
  double m0 = 0, m1 = 0;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    const double r = q.nodes[i], w = q.weights[i] * mollifier(r);
    m0 += w * r;
    m1 += w * r * r;
  }
  return m1 / m0;
}

}  // namespace

double cutoff_profile(double x) { return psi_step(3 * x - 1); }

double cutoff_profile_slope() {
  constexpr int kSamples = 200000;
  double m = 0;
  for (int k = 1; k < kSamples; ++k) m = std::max(m, std::abs(psi_slope(double(k) / kSamples)));
  return 3 * m;
}

Cutoff build_cutoff(const Shape& omega1, const Shape& omega2, const Grid& grid) {
  const auto m1 = rasterize(omega1, grid), m2 = rasterize(omega2, grid);
  std::vector<uint8_t> D1(grid.size()), D2(grid.size());
  bool any1 = false, any2 = false;
  for (size_t k = 0; k < grid.size(); ++k) {
    D1[k] = m1[k] && !m2[k];
    D2[k] = m2[k] && !m1[k];
    any1 = any1 || D1[k];
    any2 = any2 || D2[k];
  }
  Cutoff c;
  c.grid = grid;
  c.spec.C1 = mollifier_first_moment();
  c.spec.phi_slope = cutoff_profile_slope();
  if (!any1 || !any2) {
    c.spec.vacuous = true;
    c.spec.epsilon = std::numeric_limits<double>::infinity();
    c.chi.assign(grid.size(), 0.5);
    c.d1.assign(grid.size(), std::numeric_limits<double>::infinity());
    c.d2 = c.d1;
    return c;
  }
  c.d1 = distance_to(D1, grid);
  c.d2 = distance_to(D2, grid);
  double eps = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < grid.size(); ++k)
    if (D2[k]) eps = std::min(eps, c.d1[k]);
  if (!(eps > 0)) throw ValidationError("difference sets overlap: separation is zero");
  c.spec.epsilon = eps;

  // Discrete mollifier: shrink until its first moment is within eps/16.
  double eta = eps / (16 * c.spec.C1);
  std::vector<std::tuple<int, int, double>> taps;
  double moment = 0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    taps.clear();
    moment = 0;
    const int R = static_cast<int>(std::floor(eta / grid.h));
    double total = 0;
    for (int b = -R; b <= R; ++b)
      for (int a = -R; a <= R; ++a) {
        const double r = std::hypot(a, b) * grid.h / eta;
        const double w = R == 0 ? (a == 0 && b == 0 ? 1.0 : 0.0) : mollifier(r);
        if (w > 0) {
          taps.emplace_back(a, b, w);
          total += w;
        }
      }
    for (auto& [a, b, w] : taps) {
      w /= total;
      moment += w * std::hypot(a, b) * grid.h;
    }
    if (moment <= eps / 16) break;
    eta *= 0.97;
  }
  if (moment > eps / 16) throw NumericalError("mollifier first moment exceeds eps/16");
  c.spec.eta = eta;
  c.spec.first_moment = moment;

  auto mollify = [&](const std::vector<double>& d) {
    std::vector<double> out(grid.size(), 0.0);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        double s = 0;
        for (const auto& [a, b, w] : taps) {
          const int ii = std::clamp(i - a, 0, grid.nx - 1), jj = std::clamp(j - b, 0, grid.ny - 1);
          s += w * d[grid.index(ii, jj)];
        }
        out[grid.index(i, j)] = s;
      }
    return out;
  };
  const auto e1 = mollify(c.d1), e2 = mollify(c.d2);
  c.chi.resize(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) c.chi[k] = cutoff_profile(e1[k] / (e1[k] + e2[k]));

  c.grad_bound = 16.0 / (3.0 * eps) * c.spec.phi_slope;
  for (int j = 1; j + 1 < grid.ny; ++j)
    for (int i = 1; i + 1 < grid.nx; ++i) {
      const double gx = (c.chi[grid.index(i + 1, j)] - c.chi[grid.index(i - 1, j)]) / (2 * grid.h);
      const double gy = (c.chi[grid.index(i, j + 1)] - c.chi[grid.index(i, j - 1)]) / (2 * grid.h);
      c.grad_max = std::max(c.grad_max, std::hypot(gx, gy));
    }
  for (size_t k = 0; k < grid.size(); ++k) {
    if (c.d1[k] <= eps / 16) {
      ++c.plateau_cells;
      if (c.chi[k] != 0.0) ++c.plateau_violations;
    }
    if (c.d2[k] <= eps / 16) {
      ++c.plateau_cells;
      if (c.chi[k] != 1.0) ++c.plateau_violations;
    }
  }
  return c;
}

// ---------------------------------------------------------------- splitting

std::string SplitResult::to_json() const {
  nlohmann::ordered_json j;
  j["convention"] = kConvention;
  j["nx"] = grid.nx;
  j["h"] = grid.h;
  j["additivity_ulps"] = additivity_ulps;
  j["dbar_b1"] = dbar_b1;
  j["dbar_b2"] = dbar_b2;
  j["input_dbar"] = input_dbar;
  j["sup_b1"] = sup_b1;
  j["norm_g"] = norm_g;
  j["norm_b1"] = norm_b1;
  j["norm_b2"] = norm_b2;
  j["C_R"] = C_R;
  return j.dump(2);
}

namespace {

// Zero-padded linear convolution of f with 1/(pi z) sampled at cell offsets,
// times the cell area; the singular cell contributes nothing (the kernel
// integrates to zero over a centred square).
std::vector<cplx> cauchy_convolve(const std::vector<cplx>& f, const Grid& g) {
  const int P = 2 * g.nx, Q = 2 * g.ny;
  const size_t n = size_t(P) * Q;
  fftw_complex* a = fftw_alloc_complex(n);
  fftw_complex* k = fftw_alloc_complex(n);
  fftw_plan pa = fftw_plan_dft_2d(Q, P, a, a, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan pk = fftw_plan_dft_2d(Q, P, k, k, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan pb = fftw_plan_dft_2d(Q, P, a, a, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (size_t t = 0; t < n; ++t) a[t][0] = a[t][1] = k[t][0] = k[t][1] = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const cplx v = f[g.index(i, j)];
      a[size_t(j) * P + i][0] = v.real();
      a[size_t(j) * P + i][1] = v.imag();
    }
  for (int b = -(g.ny - 1); b <= g.ny - 1; ++b)
    for (int c = -(g.nx - 1); c <= g.nx - 1; ++c) {
      if (b == 0 && c == 0) continue;
      const cplx v = 1.0 / (kPi * g.h * cplx(c, b));
      const size_t t = size_t((b + Q) % Q) * P + size_t((c + P) % P);
      k[t][0] = v.real();
      k[t][1] = v.imag();
    }
  fftw_execute(pa);
  fftw_execute(pk);
  for (size_t t = 0; t < n; ++t) {
    const cplx x = cplx(a[t][0], a[t][1]) * cplx(k[t][0], k[t][1]);
    a[t][0] = x.real();
    a[t][1] = x.imag();
  }
  fftw_execute(pb);
  std::vector<cplx> out(g.size());
  const double scale = g.h * g.h / double(n);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[g.index(i, j)] = scale * cplx(a[size_t(j) * P + i][0], a[size_t(j) * P + i][1]);
  fftw_destroy_plan(pa);
  fftw_destroy_plan(pk);
  fftw_destroy_plan(pb);
  fftw_free(a);
  fftw_free(k);
  return out;
}

template <class V>
cplx dbar_at(const std::vector<V>& f, const Grid& g, int i, int j) {
  const cplx dx = (cplx(f[g.index(i + 1, j)]) - cplx(f[g.index(i - 1, j)])) / (2 * g.h);
  const cplx dy = (cplx(f[g.index(i, j + 1)]) - cplx(f[g.index(i, j - 1)])) / (2 * g.h);
  return 0.5 * (dx + cplx(0, 1) * dy);
}

// Cells at least `margin` from the complement of the mask, with a full
// stencil inside the grid.
std::vector<uint8_t> interior(const std::vector<uint8_t>& mask, const Grid& g, double margin) {
  std::vector<uint8_t> outside(mask.size());
  for (size_t k = 0; k < mask.size(); ++k) outside[k] = !mask[k];
  const auto d = distance_to(outside, g);
  std::vector<uint8_t> in(mask.size(), 0);
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const size_t k = g.index(i, j);
      in[k] = mask[k] && d[k] >= std::max(margin, 1.5 * g.h);
    }
  return in;
}

double ulp_of(double x) {
  x = std::abs(x);
  return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

}  // namespace

SplitResult cauchy_split(const std::function<cplx(cplx)>& gfun, const Shape& omega1,
                         const Shape& omega2, const Cutoff& chi, const SplitOptions& opt) {
  const Grid& g = chi.grid;
  require(chi.chi.size() == g.size(), "cutoff grid mismatch");
  require(opt.margin >= 0, "margin must be nonnegative");
  SplitResult r;
  r.grid = g;
  r.in1 = rasterize(omega1, g);
  r.in2 = rasterize(omega2, g);
  std::vector<uint8_t> both(g.size());
  for (size_t k = 0; k < g.size(); ++k) both[k] = r.in1[k] && r.in2[k];

  r.g.assign(g.size(), cplx(0));
  double gmax = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const size_t k = g.index(i, j);
      if (!both[k]) continue;
      r.g[k] = gfun(g.point(i, j));
      if (!std::isfinite(r.g[k].real()) || !std::isfinite(r.g[k].imag()))
        throw ValidationError("input is not finite on the intersection");
      gmax = std::max(gmax, std::abs(r.g[k]));
    }
  const auto in_both = interior(both, g, opt.margin);
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i)
      if (in_both[g.index(i, j)]) r.input_dbar = std::max(r.input_dbar, std::abs(dbar_at(r.g, g, i, j)));
  if (gmax > 0) r.input_dbar /= gmax;
  require(r.input_dbar <= opt.input_tol, "input is not holomorphic on the intersection");

  // h = g dbar(chi) on the intersection.
  std::vector<cplx> h(g.size(), cplx(0));
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const size_t k = g.index(i, j);
      if (both[k]) h[k] = r.g[k] * dbar_at(chi.chi, g, i, j);
    }
  r.u = cauchy_convolve(h, g);
  r.b1.assign(g.size(), cplx(0));
  r.b2.assign(g.size(), cplx(0));
  for (size_t k = 0; k < g.size(); ++k) {
    if (r.in1[k]) r.b1[k] = (both[k] ? chi.chi[k] * r.g[k] : cplx(0)) - r.u[k];
    if (both[k]) {
      r.b2[k] = r.g[k] - r.b1[k];
    } else if (r.in2[k]) {
      r.b2[k] = r.u[k];
    }
  }
  for (size_t k = 0; k < g.size(); ++k) {
    if (!both[k]) continue;
    const cplx s = r.b1[k] + r.b2[k];
    const double big = std::max({std::abs(r.b1[k].real()), std::abs(r.b2[k].real()),
                                 std::abs(r.g[k].real()), std::abs(r.b1[k].imag()),
                                 std::abs(r.b2[k].imag()), std::abs(r.g[k].imag())});
    const double u = ulp_of(big);
    if (u > 0) {
      r.additivity_ulps = std::max(r.additivity_ulps, std::abs(s.real() - r.g[k].real()) / u);
      r.additivity_ulps = std::max(r.additivity_ulps, std::abs(s.imag() - r.g[k].imag()) / u);
    }
  }
  const auto int1 = interior(r.in1, g, opt.margin), int2 = interior(r.in2, g, opt.margin);
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const size_t k = g.index(i, j);
      if (int1[k]) r.dbar_b1 = std::max(r.dbar_b1, std::abs(dbar_at(r.b1, g, i, j)));
      if (int2[k]) r.dbar_b2 = std::max(r.dbar_b2, std::abs(dbar_at(r.b2, g, i, j)));
    }
  const double area = g.h * g.h;
  double s1 = 0, s2 = 0, sg = 0;
  for (size_t k = 0; k < g.size(); ++k) {
    if (r.in1[k]) {
      s1 += std::norm(r.b1[k]);
      r.sup_b1 = std::max(r.sup_b1, std::abs(r.b1[k]));
    }
    if (r.in2[k]) s2 += std::norm(r.b2[k]);
    if (both[k]) sg += std::norm(r.g[k]);
  }
  r.norm_b1 = std::sqrt(s1 * area);
  r.norm_b2 = std::sqrt(s2 * area);
  r.norm_g = std::sqrt(sg * area);
  if (r.norm_g > 0 && std::isfinite(chi.spec.epsilon))
    r.C_R = chi.spec.epsilon * std::max(r.norm_b1, r.norm_b2) / r.norm_g;
  return r;
}

// ---------------------------------------------------------------- Friedrichs

namespace {

template <class R>
struct MeanZeroForms {
  mp::Dense<mp::cx<R>> M, B;  // unit-diagonal scaled
  explicit MeanZeroForms(const BergmanDomain& dom, int N) : M(N), B(N) {
    mp::DomainFactors<R> f(dom, N);
    const R area = f.radial[0] * f.ang(0).re;
    std::vector<mp::cx<R>> mu(N + 1);
    for (int m = 1; m <= N; ++m) mu[m] = f.radial[m] * f.ang(m) / area;
    // M[m][n] = int conj(q_m) q_n = conj(G[m][n] - area mu_m conj(mu_n)).
    for (int m = 1; m <= N; ++m)
      for (int n = 1; n <= N; ++n) {
        const mp::cx<R> g = f.radial[m + n] * f.ang(m - n) - area * (mu[m] * mp::conj(mu[n]));
        M(m - 1, n - 1) = mp::conj(g);
        B(m - 1, n - 1) = f.radial[m + n] * f.ang(m + n) - area * (mu[m] * mu[n]);
      }
    const std::vector<R> d = mp::unit_diagonal(M);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) B(i, j) = B(i, j) / (d[i] * d[j]);
  }
};

// Solves X Z = Y in place for lower-triangular X, column by column.
template <class R>
void lower_solve_columns(const mp::Dense<mp::cx<R>>& X, mp::Dense<mp::cx<R>>& Y) {
  const int n = X.n;
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i) {
      mp::cx<R> s = Y(i, c);
      for (int k = 0; k < i; ++k) s -= X(i, k) * Y(k, c);
      Y(i, c) = s / X(i, i).re;
    }
}

template <class R>
std::optional<double> friedrichs_tier(const BergmanDomain& dom, int N) {
  MeanZeroForms<R> F(dom, N);
  auto L = F.M;
  if (!mp::cholesky(L)) return std::nullopt;
  // X = conj(L); K = X^{-1} B X^{-T}.
  for (auto& v : L.a) v = mp::conj(v);
  auto Y = F.B;
  lower_solve_columns(L, Y);
  mp::Dense<mp::cx<R>> Z(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Z(i, j) = Y(j, i);
  lower_solve_columns(L, Z);
  Eigen::MatrixXcd K(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) K(i, j) = Z(j, i).to_double();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(K);
  return svd.singularValues()(0);
}

}  // namespace

FriedrichsResult friedrichs_constant(const BergmanDomain& domain, int N) {
  require(N >= 1, "friedrichs_constant: N must be at least 1");
  require(domain.kind() != BergmanDomain::Kind::Annulus,
          "friedrichs_constant: an annulus has no corners and lies outside the supported class");
  FriedrichsResult r;
  r.N = N;
  auto agree = [](std::optional<double> a, std::optional<double> b) {
    return a && b && std::abs(*a - *b) <= 1e-12 * std::max(1.0, std::abs(*b));
  };
  auto t50 = friedrichs_tier<mp::R50>(domain, N);
  auto t100 = friedrichs_tier<mp::R100>(domain, N);
  if (agree(t50, t100)) {
    r.theta = *t100;
    r.digits = 100;
    return r;
  }
  auto t200 = friedrichs_tier<mp::R200>(domain, N);
  if (agree(t100, t200)) {
    r.theta = *t200;
    r.digits = 200;
    return r;
  }
  auto t400 = friedrichs_tier<mp::R400>(domain, N);
  if (agree(t200, t400)) {
    r.theta = *t400;
    r.digits = 400;
    return r;
  }
  throw NumericalError("friedrichs_constant: Gram factorization needs more than 400 digits");
}

void friedrichs_forms(const BergmanDomain& domain, int N, Eigen::MatrixXcd& M, Eigen::MatrixXcd& B) {
  require(N >= 1, "friedrichs_forms: N must be at least 1");
  MeanZeroForms<mp::R100> F(domain, N);
  M.resize(N, N);
  B.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      M(i, j) = F.M(i, j).to_double();
      B(i, j) = F.B(i, j).to_double();
    }
}

ClosednessReport closedness_margin(const BergmanDomain& domain, int N, int samples, unsigned seed) {
  require(samples >= 1, "closedness_margin: samples must be positive");
  ClosednessReport r;
  r.theta = friedrichs_constant(domain, N).theta;
  require(r.theta < 1, "closedness_margin: theta must be below 1");
  r.margin = 1 - r.theta;
  r.samples = samples;
  Eigen::MatrixXcd M, B;
  friedrichs_forms(domain, N, M, B);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd f(N), g(N);
    for (int i = 0; i < N; ++i) {
      f(i) = cplx(nd(rng), nd(rng));
      g(i) = cplx(nd(rng), nd(rng));
    }
    const double ff = f.dot(M * f).real(), gg = g.dot(M * g).real();
    // int f g dA = f^T B g.
    const double cross = (f.transpose() * B * g)(0, 0).real();
    const double lhs = ff + gg + 2 * cross;
    const double slack = (lhs - r.margin * (ff + gg)) / (ff + gg);
    r.min_slack = std::min(r.min_slack, slack);
    if (slack < -1e-10) ++r.violations;
  }
  return r;
}

}  // namespace hh
