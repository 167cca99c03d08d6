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

#include <cmath>

#include "doctest.h"
#include "halfheat/experiments.hpp"
#include "halfheat/figure2.hpp"

using hh::cplx;
using hh::kPi;

namespace {

// P+ of the triangle from the closed-form coefficients, summed directly.
cplx series_value(double t0, double x, int terms) {
  cplx s = t0 * t0 / (2 * kPi);
  for (int n = 1; n <= terms; ++n)
    s += (1 - std::cos(n * t0)) / (kPi * double(n) * n) * std::polar(1.0, n * x);
  return s;
}

}  // namespace

TEST_CASE("figure2 boundary values match the dilog combination") {
  const double t0 = kPi / 4;
  const hh::Figure2Data d = hh::figure2(t0, 1024);
  REQUIRE(d.x.size() == 1024);
  CHECK(d.sup_error <= 1e-8);
  double sup = 0;
  for (size_t j = 0; j < d.x.size(); ++j) sup = std::max(sup, std::abs(d.p_plus[j] - d.closed_form[j]));
  CHECK(sup <= 1e-8);
  CHECK(d.c0 == doctest::Approx(t0 * t0 / (2 * kPi)).epsilon(1e-9));
  CHECK(d.alpha == doctest::Approx(-1 / (2 * kPi)).epsilon(1e-9));
}

TEST_CASE("figure2 samples agree with a direct coefficient sum") {
  const double t0 = kPi / 4;
  const hh::Figure2Data d = hh::figure2(t0, 1024);
  // Away from the kinks the oscillating tail is below 1e-9 at 2e5 terms.
  int checked = 0;
  for (size_t j = 0; j < d.x.size(); j += 37) {
    const double x = d.x[j];
    const double dist = std::min({std::abs(std::remainder(x, 2 * kPi)),
                                  std::abs(std::remainder(x - t0, 2 * kPi)),
                                  std::abs(std::remainder(x + t0, 2 * kPi))});
    if (dist < 0.2) continue;
    CHECK(std::abs(d.p_plus[j] - series_value(t0, x, 200000)) <= 1e-8);
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("dilog identity against the coefficient series") {
  const double t0 = kPi / 4;
  for (double x : {1.7, 2.5, -2.2, 3.1}) {
    const cplx closed = t0 * t0 / (2 * kPi) -
                        hh::triangle_dilog_combination(t0, std::polar(1.0, x)) / (2 * kPi);
    CHECK(std::abs(closed - series_value(t0, x, 200000)) <= 1e-9);
  }
}

TEST_CASE("figure2 table header and lossless parse") {
  const hh::Figure2Data d = hh::figure2(kPi / 4, 64);
  const std::string text = hh::figure2_table(d);
  CHECK(text.rfind("x re im\n", 0) == 0);
  const hh::TableArtifact t = hh::TableArtifact::parse(text);
  REQUIRE(t.columns == std::vector<std::string>{"x", "re", "im"});
  REQUIRE(t.rows.size() == 64);
  for (size_t j = 0; j < 64; ++j) {
    CHECK(t.rows[j][0] == d.x[j]);
    CHECK(t.rows[j][1] == d.p_plus[j].real());
    CHECK(t.rows[j][2] == d.p_plus[j].imag());
  }
  CHECK(hh::TableArtifact::parse(t.to_text()).rows == t.rows);
  CHECK(hh::TableArtifact::parse(t.to_text(',')).rows == t.rows);
}

TEST_CASE("table artifacts reject ragged rows") {
  CHECK_THROWS_AS(hh::TableArtifact::parse("a b\n1 2\n3\n"), hh::ValidationError);
  hh::TableArtifact t{{"a", "b"}, {{1.0, 2.0}, {3.0}}};
  CHECK_THROWS_AS(t.to_text(), hh::ValidationError);
}
