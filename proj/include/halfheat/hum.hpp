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

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "halfheat/spectral.hpp"

namespace hh {

// H2: state and control modes 0..N. L2: modes -N..N.
enum class ControlSystem { H2, L2 };
const char* to_string(ControlSystem s);

std::vector<int> mode_range(ControlSystem s, int N);

// Lambda[m][n] = rho(|m|+|n|) * A^(n-m), rho(s) = (1 - e^{-Ts})/s, rho(0) = T,
// A^(d) = (1/2pi) int_omega e^{i d x} dx. Indices follow mode_range.
struct ControlGramian {
  ControlSystem system = ControlSystem::H2;
  double T = 0.0;
  int N = 0;
  int steps = 0;  // 0: continuous-time closed form
  std::vector<int> modes;
  Eigen::MatrixXcd entries;
};

ControlGramian hum_gramian(double T, const ArcInterval& arc, ControlSystem system, int N);

// Gramian of the piecewise-constant-in-time control space on `steps` cells:
// Lambda[m][n] = A^(n-m) dt sum_j w_jm w_jn with w_jm the cell average of
// e^{-|m|(T-s)}. Converges to hum_gramian as steps grows.
ControlGramian hum_gramian_discrete(double T, const ArcInterval& arc, ControlSystem system, int N,
                                    int steps);

// u(t, x) = 1_omega(x) sum_n c_n(t) e^{inx}, c_n constant on each of the
// uniform time cells.
class ControlField {
 public:
  ControlField(double T, ArcInterval arc, std::vector<int> modes, int steps);

  double T() const { return T_; }
  const ArcInterval& arc() const { return arc_; }
  const std::vector<int>& modes() const { return modes_; }
  int steps() const { return static_cast<int>(c_.rows()); }
  double dt() const { return T_ / steps(); }

  // Row j: time cell [j dt, (j+1) dt); column k: mode modes()[k].
  Eigen::MatrixXcd& coefficients() { return c_; }
  const Eigen::MatrixXcd& coefficients() const { return c_; }

  cplx value(double t, double x) const;
  // sqrt((1/2pi) int_0^T int_omega |u|^2 dx dt), spectrally on the arc.
  double norm() const;
  // (1/2pi) int_0^T int_omega u dx dt.
  cplx mean() const;

  // Rows "t,mode,re,im" with t the cell start.
  std::string to_csv() const;

 private:
  double T_;
  ArcInterval arc_;
  std::vector<int> modes_;
  Eigen::MatrixXcd c_;
};

struct SynthesisReport {
  ControlSystem system = ControlSystem::H2;
  double epsilon = 0.0;
  double residual = 0.0;  // ||f(T)|| / ||f0|| from simulation (0 when f0 = 0)
  double control_norm = 0.0;
  double condition = 0.0;
  double mean_residual = 0.0;  // |(1/2pi) int int u + f0^(0)|

  std::string to_json() const;
};

struct SynthesisOptions {
  int steps = 512;
  // Leaves mode 0 unregularized so the synthesized control matches the
  // mean exactly.
  bool exact_mean = true;
};

struct Synthesis {
  ControlField control;
  SynthesisReport report;
  CircleFunction final_state;
  Eigen::VectorXcd adjoint;  // g in (Lambda + eps W) g = -S(T) f0
};

Synthesis synthesize_h2(const HardyFunction& f0, double T, const ArcInterval& arc, int N,
                        double eps, const SynthesisOptions& opt = {});
Synthesis synthesize_l2(const CircleFunction& f0, double T, const ArcInterval& arc, int N,
                        double eps, const SynthesisOptions& opt = {});

std::vector<SynthesisReport> epsilon_sweep(ControlSystem system, const CircleFunction& f0,
                                           double T, const ArcInterval& arc, int N,
                                           const std::vector<double>& eps,
                                           const SynthesisOptions& opt = {});

// States on the control's mode range at times k T / steps, k = 0..steps,
// by exact exponential integration of each mode. steps must be a multiple of
// the control's cell count.
std::vector<CircleFunction> simulate(const CircleFunction& f0, const ControlField& u, int steps);

// |(1/2pi) int int u dt dx + f0^(0)|.
double mean_matching_check(const ControlField& u, const CircleFunction& f0);

// Random control with the same grid and modes as u whose terminal effect
// vanishes: each mode's time profile is orthogonal to every cell-averaged
// exponential e^{-|m|(T-s)}. Scaled to norm `scale`.
ControlField kernel_perturbation(const ControlField& u, unsigned seed, double scale);

// Kernel perturbation test: max over samples of ||u|| - ||u + w|| for random
// w in the kernel of the discrete input-to-state map (nonpositive when u is
// minimal).
double minimality_defect(const ControlField& u, int samples, unsigned seed);

// Projection of a zero-mean space-time field onto span of
// conj(z) d_w phi and z d_wbar phi, z = e^{-(T-t)+ix}, w = t + ix, with phi
// running over bubble-weighted Legendre products of degree <= N in t and x.
struct ZeroMeanDecomposition {
  int N = 0;
  int columns = 0;
  int rank = 0;
  double residual = 0.0;  // relative weighted L^2 residual
  std::function<cplx(double, double)> v1;  // component in the kernel of P+ F_T
  std::function<cplx(double, double)> v2;  // component in its conjugate
};

ZeroMeanDecomposition decompose_zero_mean(const std::function<cplx(double, double)>& v, double T,
                                          const ArcInterval& arc, int N);
ZeroMeanDecomposition decompose_zero_mean(const ControlField& v, int N);

}  // namespace hh
