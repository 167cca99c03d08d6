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

#include "halfheat/sector.hpp"
#include "mp.hpp"

namespace hh::mp {

// Radial and angular factors of a BergmanDomain at precision R. Inputs are
// taken as exact binary doubles.
template <class R>
struct DomainFactors {
  std::vector<R> radial;        // index s = 0..2N
  std::vector<cx<R>> angular;   // index d + 2N, d = -2N..2N
  int N = 0;

  DomainFactors(const BergmanDomain& dom, int order) : N(order) {
    radial.resize(2 * N + 1);
    angular.resize(4 * N + 1);
    const R two_pi = 2 * pi<R>();
    R r0, r1;
    if (dom.kind() == BergmanDomain::Kind::Sector) {
      const AnnularSector& s = dom.sector();
      const R T(s.T());
      r0 = s.side() == Side::Exterior ? R(1) : exp(-T);
      r1 = s.side() == Side::Exterior ? exp(T) : R(1);
    } else {
      r0 = R(dom.r_inner());
      r1 = R(dom.r_outer());
    }
    for (int s = 0; s <= 2 * N; ++s) {
      const R k(s + 2);
      radial[s] = (pow(r1, k) - pow(r0, k)) / k;
    }
    for (int d = -2 * N; d <= 2 * N; ++d) {
      cx<R> v;
      if (dom.kind() == BergmanDomain::Kind::Sector) {
        const R t1(dom.sector().arc().theta1()), t2(dom.sector().arc().theta2());
        if (d == 0) {
          v = cx<R>(t2 - t1);
        } else {
          // (e^{i d t2} - e^{i d t1}) / (i d)
          const cx<R> diff = expi<R>(R(d) * t2) - expi<R>(R(d) * t1);
          v = cx<R>(diff.im / R(d), -diff.re / R(d));
        }
      } else if (d == 0) {
        v = cx<R>(two_pi);
      }
      angular[d + 2 * N] = v;
    }
  }
  const cx<R>& ang(int d) const { return angular[d + 2 * N]; }
};

// Monomial Gram <z^m, z^n> for 0 <= m, n <= N.
template <class R>
Dense<cx<R>> gram(const DomainFactors<R>& f) {
  Dense<cx<R>> G(f.N + 1);
  for (int m = 0; m <= f.N; ++m)
    for (int n = 0; n <= f.N; ++n) G(m, n) = f.radial[m + n] * f.ang(m - n);
  return G;
}

}  // namespace hh::mp
