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

#include "halfheat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hh {

namespace {

using Type = ExperimentConfig::Type;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_real(const std::string& key, const std::string& s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v))
    throw ValidationError("config key '" + key + "': not a finite real: '" + s + "'");
  return v;
}

long parse_int(const std::string& key, const std::string& s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end)
    throw ValidationError("config key '" + key + "': not an integer: '" + s + "'");
  return v;
}

const ExperimentConfig::Key& find_key(const std::string& name) {
  for (const auto& k : ExperimentConfig::keys())
    if (k.name == name) return k;
  throw ValidationError("unknown config key '" + name + "'");
}

std::string canonical(const ExperimentConfig::Key& k, const std::string& raw) {
  const std::string v = trim(raw);
  switch (k.type) {
    case Type::Real:
      return format_real(parse_real(k.name, v));
    case Type::Int:
      return std::to_string(parse_int(k.name, v));
    case Type::Complex: {
      const auto parts = split(v, ',');
      if (parts.size() != 2) throw ValidationError("config key '" + k.name + "': expected re,im");
      return format_real(parse_real(k.name, parts[0])) + "," + format_real(parse_real(k.name, parts[1]));
    }
    case Type::RealList:
    case Type::IntList: {
      if (v.empty()) return "";
      std::string out;
      for (const auto& p : split(v, ',')) {
        if (!out.empty()) out += ",";
        out += k.type == Type::RealList ? format_real(parse_real(k.name, p))
                                        : std::to_string(parse_int(k.name, p));
      }
      return out;
    }
    case Type::Flag:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      throw ValidationError("config key '" + k.name + "': expected true or false");
    default:
      return v;
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

const std::vector<ExperimentConfig::Key>& ExperimentConfig::keys() {
  static const std::vector<Key> k = {
      {"theta1", Type::Real, "0", "arc start (radians)"},
      {"theta2", Type::Real, "1.5707963267948966", "arc end (radians)"},
      {"T", Type::Real, "1", "sector depth / control horizon"},
      {"side", Type::Text, "exterior", "exterior or interior sector"},
      {"N", Type::Int, "32", "truncation order"},
      {"orders", Type::IntList, "", "truncation orders"},
      {"eps", Type::RealList, "", "regularization sweep"},
      {"horizons", Type::RealList, "", "control horizons for cost-sweep"},
      {"steps", Type::Int, "512", "time steps per control"},
      {"samples", Type::Int, "1024", "circle samples"},
      {"quad", Type::Int, "20", "quadrature resolution (coefficient and oracle rules)"},
      {"resolution_scale", Type::Int, "1", "multiplier on every resolution in calibrate"},
      {"grid", Type::IntList, "", "grid resolutions for sepsing"},
      {"theta0", Type::Real, "0.78539816339744828", "triangle half-width"},
      {"state", Type::Text, "", "triangle, kernel, bump or a fixture density name"},
      {"u", Type::Complex, "0.5,0", "kernel parameter"},
      {"center", Type::Real, "0.78539816339744828", "state centre angle"},
      {"halfwidth", Type::Real, "0.70685834705770345", "bump half-width"},
      {"power", Type::Int, "4", "bump power"},
      {"system", Type::Text, "h2", "h2 or l2"},
      {"domain", Type::Text, "sector", "disk, sector or annulus"},
      {"pole", Type::Complex, "1.5556349186104046,1.5556349186104046", "pole of the sepsing input"},
      {"plateau", Type::Real, "1.1", "growth ratio below which constants plateau"},
      {"diverging", Type::Real, "2", "growth ratio above which constants diverge"},
      {"seed", Type::Int, "20260101", "random seed"},
      {"input", Type::Text, "", "JSON state file"},
      {"fixtures", Type::Text, "fixtures", "fixture directory"},
      {"out", Type::Text, "", "output directory (stdout only when empty)"},
      {"date", Type::Text, "2026-01-01", "provenance date written by calibrate"},
      {"only", Type::Text, "", "comma-separated fixture subset for calibrate"},
      {"check", Type::Flag, "false", "calibrate: compare instead of writing"},
  };
  return k;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& k : keys()) values_[k.name] = canonical(k, k.fallback);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  values_[key] = canonical(find_key(key), value);
  explicit_.insert(key);
}

void ExperimentConfig::set_default(const std::string& key, const std::string& value) {
  if (!is_explicit(key)) values_[key] = canonical(find_key(key), value);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  find_key(key);
  return values_.at(key);
}

double ExperimentConfig::real(const std::string& key) const { return parse_real(key, text(key)); }
long ExperimentConfig::integer(const std::string& key) const { return parse_int(key, text(key)); }
bool ExperimentConfig::flag(const std::string& key) const { return text(key) == "true"; }

cplx ExperimentConfig::complex(const std::string& key) const {
  const auto p = split(text(key), ',');
  return {parse_real(key, p.at(0)), parse_real(key, p.at(1))};
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  if (text(key).empty()) return out;
  for (const auto& p : split(text(key), ',')) out.push_back(parse_real(key, p));
  return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& key) const {
  std::vector<int> out;
  if (text(key).empty()) return out;
  for (const auto& p : split(text(key), ',')) out.push_back(static_cast<int>(parse_int(key, p)));
  return out;
}

void ExperimentConfig::validate() const {
  const double t1 = real("theta1"), t2 = real("theta2");
  require(t2 > t1, "invalid arc: theta2 must exceed theta1");
  require(t2 - t1 < kTwoPi, "invalid arc: length must be below 2 pi");
  require(real("T") > 0, "T must be positive");
  require(text("side") == "exterior" || text("side") == "interior", "side must be exterior or interior");
  require(integer("N") >= 1, "N must be at least 1");
  for (int n : integers("orders")) require(n >= 1, "orders must be at least 1");
  for (double e : reals("eps")) require(e > 0, "eps values must be positive");
  for (double h : reals("horizons")) require(h > 0, "horizons must be positive");
  for (int n : integers("grid")) require(n >= 16, "grid resolutions must be at least 16");
  require(integer("steps") >= 1, "steps must be at least 1");
  require(integer("samples") >= 1, "samples must be at least 1");
  require(integer("quad") >= 2, "quad must be at least 2");
  require(integer("resolution_scale") >= 1, "resolution_scale must be at least 1");
  require(real("theta0") > 0 && real("theta0") <= kPi, "theta0 must lie in (0, pi]");
  require(real("halfwidth") > 0, "halfwidth must be positive");
  require(integer("power") >= 1, "power must be at least 1");
  require(text("system") == "h2" || text("system") == "l2", "system must be h2 or l2");
  require(real("plateau") > 1 && real("diverging") > real("plateau"),
          "growth thresholds need 1 < plateau < diverging");
  require(integer("seed") >= 0, "seed must be nonnegative");
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + values_.at(k.name) + "\n";
  return out;
}

}  // namespace hh
