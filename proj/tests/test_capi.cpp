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
#include <cstring>
#include <string>

#include "doctest.h"
#include "halfheat/halfheat.h"

TEST_CASE("version and commands") {
  CHECK(std::string(hh_version()) == "1.0.0");
  CHECK(hh_command_count() == 11);
  CHECK(std::string(hh_command_name(0)) == "figure2");
  CHECK(hh_command_name(hh_command_count()) == nullptr);
  CHECK(hh_config_key_count() > 0);
  CHECK(std::string(hh_config_key_name(0)) == "theta1");
  CHECK(std::strlen(hh_config_key_help(0)) > 0);
  CHECK(hh_config_key_name(hh_config_key_count()) == nullptr);
}

TEST_CASE("config handle") {
  hh_config* cfg = nullptr;
  REQUIRE(hh_config_create(&cfg) == HH_OK);
  CHECK(hh_config_set(cfg, "N", " 5 ") == HH_OK);
  const char* v = nullptr;
  CHECK(hh_config_get(cfg, "N", &v) == HH_OK);
  CHECK(std::string(v) == "5");
  CHECK(hh_config_set(cfg, "bogus", "1") == HH_ERR_VALIDATION);
  CHECK(std::strlen(hh_last_error()) > 0);
  CHECK(hh_config_set(cfg, "T", "abc") == HH_ERR_VALIDATION);
  CHECK(hh_config_get(cfg, "T", &v) == HH_OK);
  CHECK(std::string(hh_last_error()).empty());
  const char* text = nullptr;
  CHECK(hh_config_to_text(cfg, &text) == HH_OK);
  CHECK(std::string(text).find("N = 5\n") != std::string::npos);
  CHECK(hh_config_parse(cfg, "theta1 = 2\ntheta2 = 1\n") == HH_ERR_VALIDATION);
  CHECK(hh_config_load(cfg, "/nonexistent.cfg") == HH_ERR_VALIDATION);
  CHECK(hh_config_create(nullptr) == HH_ERR_VALIDATION);
  CHECK(hh_config_set(nullptr, "N", "1") == HH_ERR_VALIDATION);
  hh_config_destroy(cfg);
}

TEST_CASE("run gram") {
  hh_config* cfg = nullptr;
  REQUIRE(hh_config_create(&cfg) == HH_OK);
  REQUIRE(hh_config_parse(cfg, "N = 2\nT = 0.6931471805599453\n") == HH_OK);
  hh_result* r = nullptr;
  REQUIRE(hh_run("gram", cfg, &r) == HH_OK);
  REQUIRE(r != nullptr);
  const size_t n = hh_result_artifact_count(r);
  REQUIRE(n >= 2);
  CHECK(std::string(hh_result_artifact_name(r, n - 1)) == "gram.config");
  size_t len = 0;
  const char* data = hh_result_artifact_data(r, 0, &len);
  REQUIRE(data != nullptr);
  CHECK(len == std::strlen(data));
  CHECK(hh_result_artifact_name(r, n) == nullptr);
  CHECK(std::strlen(hh_result_text(r)) > 0);
  hh_result_destroy(r);

  hh_result* bad = reinterpret_cast<hh_result*>(1);
  CHECK(hh_run("nope", cfg, &bad) == HH_ERR_VALIDATION);
  CHECK(bad == nullptr);
  hh_config_destroy(cfg);
}

TEST_CASE("scalar entry points") {
  double re = 0, im = 0;
  REQUIRE(hh_dilog(1, 0, &re, &im) == HH_OK);
  CHECK(re == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-14));
  CHECK(std::abs(im) <= 1e-15);
  CHECK(hh_dilog(2, 0, &re, &im) == HH_ERR_VALIDATION);
  CHECK(hh_dilog(0, 0, nullptr, &im) == HH_ERR_VALIDATION);

  REQUIRE(hh_gram_entry(0, std::log(2.0), 0, M_PI / 2, 0, 0, &re, &im) == HH_OK);
  CHECK(re == doctest::Approx(3 * M_PI / 4).epsilon(1e-13));
  REQUIRE(hh_gram_entry(0, std::log(2.0), 0, M_PI / 2, 0, 1, &re, &im) == HH_OK);
  CHECK(re == doctest::Approx(7.0 / 3).epsilon(1e-13));
  CHECK(im == doctest::Approx(-7.0 / 3).epsilon(1e-13));
  CHECK(hh_gram_entry(3, 1, 0, 1, 0, 0, &re, &im) == HH_ERR_VALIDATION);
  CHECK(hh_gram_entry(0, 1, 1, 0, 0, 0, &re, &im) == HH_ERR_VALIDATION);

  double c = 0;
  REQUIRE(hh_kernel_observability(0, 0, 1, 0, M_PI / 2, 4, &c) == HH_OK);
  CHECK(c > 0);
  double theta = 1;
  REQUIRE(hh_friedrichs_theta(0, 1, 0, 1, 8, &theta) == HH_OK);
  CHECK(std::abs(theta) <= 1e-12);
  REQUIRE(hh_friedrichs_theta(1, std::log(2.0), 0, M_PI / 2, 8, &theta) == HH_OK);
  CHECK(theta > 0);
  CHECK(theta < 1);
  CHECK(hh_friedrichs_theta(2, 1, 0, 1, 8, &theta) == HH_ERR_VALIDATION);
}
