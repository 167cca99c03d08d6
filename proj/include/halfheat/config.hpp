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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "halfheat/common.hpp"

namespace hh {

// Plain-text key = value configuration. Every key has a typed default; values
// are stored in canonical form (17 significant digits for reals) so that
// to_text() followed by from_text() reproduces the same object.
class ExperimentConfig {
 public:
  enum class Type { Real, Int, RealList, IntList, Complex, Text, Flag };
  struct Key {
    std::string name;
    Type type;
    std::string fallback;
    std::string help;
  };

  ExperimentConfig();

  static const std::vector<Key>& keys();
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  // Canonicalizes and validates the value; marks the key as explicitly set.
  void set(const std::string& key, const std::string& value);
  // Leaves explicitly set keys alone.
  void set_default(const std::string& key, const std::string& value);
  bool is_explicit(const std::string& key) const { return explicit_.count(key) > 0; }

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  cplx complex(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  // Empty list keys mean "use the command default".
  bool empty(const std::string& key) const { return text(key).empty(); }

  // Cross-key checks (theta2 > theta1 and so on).
  void validate() const;
  std::string to_text() const;

  bool operator==(const ExperimentConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

// Shortest round-trip form with 17 significant digits.
std::string format_real(double x);

}  // namespace hh
