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

#include "halfheat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "halfheat/boundary.hpp"
#include "halfheat/decomposition.hpp"
#include "halfheat/figure2.hpp"
#include "halfheat/hum.hpp"
#include "halfheat/observability.hpp"
#include "halfheat/sector.hpp"
#include "json.hpp"
#include "quadrature.hpp"

namespace hh {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << data;
}

ArcInterval arc_of(const ExperimentConfig& c) { return ArcInterval(c.real("theta1"), c.real("theta2")); }

Side side_of(const ExperimentConfig& c) {
  return c.text("side") == "interior" ? Side::Interior : Side::Exterior;
}

AnnularSector sector_of(const ExperimentConfig& c) {
  return AnnularSector(side_of(c), c.real("T"), arc_of(c));
}

std::vector<int> orders_or(const ExperimentConfig& c, std::vector<int> fallback) {
  return c.empty("orders") ? fallback : c.integers("orders");
}

std::vector<double> eps_or(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.empty("eps") ? fallback : c.reals("eps");
}

// Keys of a JSON state file fill in whatever the caller has not set.
void apply_input(ExperimentConfig& c) {
  if (c.text("input").empty()) return;
  const ojson j = ojson::parse(read_file(c.text("input")), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("config") || !j["config"].is_object())
    throw ValidationError("input file " + c.text("input") + " needs a \"config\" object");
  for (const auto& [k, v] : j["config"].items())
    c.set_default(k, v.is_string() ? v.get<std::string>() : v.dump());
  c.validate();
}

CoefficientSource state_of(const ExperimentConfig& c) {
  const std::string& s = c.text("state");
  if (s == "triangle") return CoefficientSource::triangle(c.real("theta0"), c.real("center"));
  if (s == "kernel") return CoefficientSource::kernel(c.complex("u"));
  if (s == "bump") return CoefficientSource::poly_bump(c.real("center"), c.real("halfwidth"),
                                                       static_cast<int>(c.integer("power")));
  throw ValidationError("unknown state '" + s + "' (triangle, kernel or bump)");
}

BoundaryDensity density_of(const std::string& name, const ArcInterval& arc) {
  for (auto& d : fixture_corpus(arc))
    if (d.name() == name) return d;
  throw ValidationError("unknown density '" + name +
                        "' (triangle, bump, log-kernel, indicator, modulated-bump-4, modulated-bump-16)");
}

GrowthThresholds thresholds_of(const ExperimentConfig& c) {
  return GrowthThresholds{c.real("plateau"), c.real("diverging")};
}

// ------------------------------------------------------------------ commands

ExperimentOutput cmd_figure2(ExperimentConfig c) {
  const Figure2Data d = figure2(c.real("theta0"), static_cast<int>(c.integer("samples")));
  ExperimentOutput o;
  o.primary = figure2_table(d);
  o.artifacts.push_back({"figure2.dat", o.primary});
  ojson meta;
  meta["convention"] = kConvention;
  meta["theta0"] = d.theta0;
  meta["c0"] = d.c0;
  meta["alpha"] = d.alpha;
  meta["sup_error"] = d.sup_error;
  o.artifacts.push_back({"figure2.json", meta.dump(2) + "\n"});
  o.resolved = c;
  return o;
}

ExperimentOutput cmd_gram(ExperimentConfig c) {
  const AnnularSector s = sector_of(c);
  const Eigen::MatrixXcd G = monomial_gram(BergmanDomain::sector(s), static_cast<int>(c.integer("N")));
  ExperimentOutput o;
  o.primary = matrix_csv(G);
  o.artifacts.push_back({"gram.csv", o.primary});
  o.resolved = c;
  return o;
}

ExperimentOutput cmd_constants(ExperimentConfig c, Side side) {
  c.set_default("side", side == Side::Exterior ? "exterior" : "interior");
  c.set_default("state", side == Side::Exterior ? "triangle" : "kernel");
  apply_input(c);
  require(side_of(c) == side, std::string("this command needs an ") + to_string(side) + " sector");
  const AnnularSector s = sector_of(c);
  const auto rep = observability_report(state_of(c), s, orders_or(c, {8, 16, 32, 48}), thresholds_of(c));
  ojson j = ojson::parse(rep.to_json());
  if (c.text("state") == "kernel") {
    const cplx u = c.complex("u");
    // The kernel's singularity 1/conj(u) lies in the exterior sector iff u lies in the interior one.
    j["u"] = {u.real(), u.imag()};
    j["u_in_interior_sector"] = AnnularSector(Side::Interior, s.T(), s.arc()).contains(u);
  }
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({side == Side::Exterior ? "observe.json" : "reach.json", o.primary});
  o.resolved = c;
  return o;
}

HardyFunction hardy_state(const ExperimentConfig& c, int N) { return state_of(c).to_hardy(N); }

// Real states (bump, triangle) carry the conjugate negative modes; the L^2
// system sees all of them. The kernel state is analytic.
CircleFunction real_series(const HardyFunction& h) {
  CircleFunction f(h.nmax());
  for (int n = 0; n <= h.nmax(); ++n) {
    f.set(n, h[n]);
    if (n > 0) f.set(-n, std::conj(h[n]));
  }
  return f;
}

CircleFunction initial_state(const ExperimentConfig& c, int N, ControlSystem sys) {
  const HardyFunction h = hardy_state(c, N);
  if (sys == ControlSystem::H2 || c.text("state") == "kernel") return h.to_circle();
  return real_series(h);
}

ExperimentOutput cmd_synthesize(ExperimentConfig c) {
  c.set_default("state", "bump");
  apply_input(c);
  const ControlSystem sys = c.text("system") == "l2" ? ControlSystem::L2 : ControlSystem::H2;
  const int N = static_cast<int>(c.integer("N"));
  const double T = c.real("T");
  const ArcInterval arc = arc_of(c);
  const auto eps = eps_or(c, {1e-4, 1e-6, 1e-8, 1e-10});
  SynthesisOptions opt;
  opt.steps = static_cast<int>(c.integer("steps"));
  const CircleFunction f0 = initial_state(c, N, sys);
  const auto reports = epsilon_sweep(sys, f0, T, arc, N, eps, opt);
  const Synthesis last = sys == ControlSystem::H2
                             ? synthesize_h2(riesz_project(f0), T, arc, N, eps.back(), opt)
                             : synthesize_l2(f0, T, arc, N, eps.back(), opt);
  ojson j;
  j["convention"] = kConvention;
  j["system"] = to_string(sys);
  j["state"] = c.text("state");
  j["N"] = N;
  j["T"] = T;
  ojson rows = ojson::array();
  for (const auto& r : reports) rows.push_back(ojson::parse(r.to_json()));
  j["sweep"] = rows;
  j["minimality_defect"] =
      minimality_defect(last.control, 50, static_cast<unsigned>(c.integer("seed")));
  if (sys == ControlSystem::L2) j["mean_matching"] = mean_matching_check(last.control, f0);
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({"synthesize.json", o.primary});
  o.artifacts.push_back({"control.csv", last.control.to_csv()});
  o.resolved = c;
  return o;
}

ExperimentOutput cmd_classify(ExperimentConfig c) {
  c.set_default("state", "all");
  const AnnularSector s(Side::Exterior, c.real("T"), arc_of(c));
  std::vector<BoundaryDensity> ds;
  if (c.text("state") == "all") {
    ds = fixture_corpus(s.arc());
  } else {
    ds.push_back(density_of(c.text("state"), s.arc()));
  }
  ojson arr = ojson::array();
  int violations = 0;
  for (const auto& d : ds) {
    const HierarchyReport r = condition_hierarchy(d, s);
    violations += r.violations;
    arr.push_back(ojson::parse(r.to_json()));
  }
  ojson j;
  j["convention"] = kConvention;
  j["total_violations"] = violations;
  j["reports"] = arr;
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({"classify.json", o.primary});
  o.resolved = c;
  return o;
}

double single_mode_exact(const AnnularSector& s) {
  const double L = s.arc().length(), k1 = kPi / L;
  return k1 * L / 8 / std::tanh(k1 * s.T());
}

ExperimentOutput cmd_cns(ExperimentConfig c) {
  c.set_default("state", "triangle");
  const AnnularSector s(Side::Exterior, c.real("T"), arc_of(c));
  const BoundaryDensity g = density_of(c.text("state"), s.arc());
  ojson j;
  j["convention"] = kConvention;
  j["density"] = g.name();
  const RectangleHarmonic mode{s.T(), s.arc().theta1(), s.arc().length(), {cplx(1)}};
  j["single_mode"] = {{"dw_norm_squared", dw_norm_squared(mode, 0, s.T())},
                      {"closed_form", single_mode_exact(s)}};
  const RectangleHarmonic h = rectangle_harmonic_extension(g, s);
  const DzNormReport dz = dz_norm_diagnostic(h);
  j["dz"] = {{"deltas", dz.deltas},
             {"norms", dz.norms},
             {"increments", dz.increments},
             {"verdict", to_string(dz.verdict)}};
  if (dz.verdict == Trend::Convergent) {
    const BergmanRepresenter psi(h);
    const auto res = psi.duality_residuals(g.coefficients(64), 16);
    j["duality_residuals"] = res;
    j["duality_max"] = *std::max_element(res.begin(), res.end());
    j["dbar_residual"] = psi.dbar_residual();
  }
  j["pseudo_carleson"] = ojson::parse(pseudo_carleson_ratio(g, s, make_contours(s)).to_json());
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({"cns.json", o.primary});
  o.artifacts.push_back({"dz.csv", dz.to_csv()});
  o.resolved = c;
  return o;
}

BergmanDomain friedrichs_domain(const ExperimentConfig& c) {
  const std::string& d = c.text("domain");
  if (d == "disk") return BergmanDomain::unit_disk();
  if (d == "annulus") return BergmanDomain::annulus(std::exp(-c.real("T")), 1.0);
  if (d == "sector") return BergmanDomain::sector(sector_of(c));
  throw ValidationError("unknown domain '" + d + "' (disk, sector or annulus)");
}

ExperimentOutput cmd_friedrichs(ExperimentConfig c) {
  c.set_default("side", "interior");
  c.set_default("T", format_real(std::log(2.0)));
  const BergmanDomain dom = friedrichs_domain(c);
  const auto orders = orders_or(c, {8, 16, 24, 32});
  ojson j;
  j["convention"] = kConvention;
  j["domain"] = c.text("domain");
  ojson rows = ojson::array();
  for (int N : orders) {
    const FriedrichsResult r = friedrichs_constant(dom, N);
    rows.push_back({{"N", N}, {"theta", r.theta}, {"digits", r.digits}});
  }
  j["theta"] = rows;
  const ClosednessReport cr =
      closedness_margin(dom, orders.back(), 100, static_cast<unsigned>(c.integer("seed")));
  j["closedness"] = {{"N", orders.back()},
                     {"margin", cr.margin},
                     {"samples", cr.samples},
                     {"min_slack", cr.min_slack},
                     {"violations", cr.violations}};
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({"friedrichs.json", o.primary});
  o.resolved = c;
  return o;
}

struct SepsingGeometry {
  Shape o1, o2;
  cplx lo;
  double side;
};

// Omega1 = D(0, e^{T/4}) with the exterior sector of depth T/2 attached,
// Omega2 = the exterior sector of depth T, over the configured arc.
SepsingGeometry sepsing_geometry(const ExperimentConfig& c) {
  const ArcInterval arc = arc_of(c);
  const double T = c.real("T");
  SepsingGeometry g{Shape::unite(Shape::disk(0, std::exp(T / 4)),
                                 Shape::sector(AnnularSector(Side::Exterior, T / 2, arc))),
                    Shape::sector(AnnularSector(Side::Exterior, T, arc)), cplx(0), 0};
  const double R = std::exp(T) * 1.03;
  g.lo = cplx(-R * 0.5, -R * 0.5);
  g.side = 1.5 * R;
  return g;
}

ojson cutoff_json(const Cutoff& c) {
  return {{"nx", c.grid.nx},
          {"h", c.grid.h},
          {"epsilon", c.spec.epsilon},
          {"eta", c.spec.eta},
          {"C1", c.spec.C1},
          {"first_moment", c.spec.first_moment},
          {"phi_slope", c.spec.phi_slope},
          {"vacuous", c.spec.vacuous},
          {"grad_max", c.grad_max},
          {"grad_bound", c.grad_bound},
          {"plateau_cells", c.plateau_cells},
          {"plateau_violations", c.plateau_violations}};
}

ojson sepsing_json(const ExperimentConfig& c, int scale, std::vector<SplitResult>* keep = nullptr) {
  const SepsingGeometry geo = sepsing_geometry(c);
  std::vector<int> grids = c.empty("grid") ? std::vector<int>{128, 256, 512} : c.integers("grid");
  for (int& n : grids) n *= scale;
  const cplx p = c.complex("pole");
  require(geo.o2.contains(p) && !geo.o1.contains(p), "sepsing: the pole must lie in Omega2 \\ Omega1");
  ojson j;
  j["convention"] = kConvention;
  j["pole"] = {p.real(), p.imag()};
  {
    const Grid g = Grid::square(cplx(-1.2, -1.2), 4.0, 512 * scale);
    j["two_disk_cutoff"] = cutoff_json(build_cutoff(Shape::disk(0, 1), Shape::disk(1.5, 1), g));
  }
  ojson runs = ojson::array();
  std::vector<double> r1, r2;
  for (int n : grids) {
    const Grid g = Grid::square(geo.lo, geo.side, n);
    const Cutoff chi = build_cutoff(geo.o1, geo.o2, g);
    SplitResult r = cauchy_split([p](cplx z) { return 1.0 / (z - p); }, geo.o1, geo.o2, chi);
    ojson rj = ojson::parse(r.to_json());
    rj.erase("convention");
    rj["cutoff"] = cutoff_json(chi);
    runs.push_back(rj);
    r1.push_back(r.dbar_b1);
    r2.push_back(r.dbar_b2);
    if (keep) keep->push_back(std::move(r));
  }
  j["refinement"] = runs;
  std::vector<double> f1, f2;
  for (size_t k = 1; k < r1.size(); ++k) {
    f1.push_back(r1[k - 1] / r1[k]);
    f2.push_back(r2[k - 1] / r2[k]);
  }
  j["dbar_reduction_b1"] = f1;
  j["dbar_reduction_b2"] = f2;
  return j;
}

ExperimentOutput cmd_sepsing(ExperimentConfig c) {
  std::vector<SplitResult> runs;
  const ojson j = sepsing_json(c, 1, &runs);
  ExperimentOutput o;
  o.primary = j.dump(2) + "\n";
  o.artifacts.push_back({"sepsing.json", o.primary});
  if (!c.text("out").empty() && !runs.empty()) {
    fs::create_directories(c.text("out"));
    const SplitResult& r = runs.back();
    const std::string base = (fs::path(c.text("out")) / "sepsing").string();
    GridField{r.grid, r.b1}.export_binary(base + "_b1");
    GridField{r.grid, r.b2}.export_binary(base + "_b2");
  }
  o.resolved = c;
  return o;
}

ExperimentOutput cmd_cost_sweep(ExperimentConfig c) {
  c.set_default("state", "bump");
  apply_input(c);
  const auto horizons = c.empty("horizons") ? std::vector<double>{4, 2, 1, 0.5, 0.25, 0.125}
                                            : c.reals("horizons");
  CostSweepOptions opt;
  opt.N = static_cast<int>(c.integer("N"));
  opt.steps = static_cast<int>(c.integer("steps"));
  const CostSweep cs = cost_vs_time_sweep(hardy_state(c, opt.N), horizons, arc_of(c), opt);
  ExperimentOutput o;
  o.primary = cs.to_csv();
  o.artifacts.push_back({"cost_sweep.csv", o.primary});
  o.resolved = c;
  return o;
}

// ------------------------------------------------------------------ calibrate

struct FixtureContext {
  const ExperimentConfig& cfg;
  int scale;
};

ojson provenance(const FixtureContext& fc, const std::string& oracle, ojson resolution) {
  return {{"generator", "halfheat calibrate"},
          {"oracle", oracle},
          {"resolution", std::move(resolution)},
          {"resolution_scale", fc.scale},
          {"date", fc.cfg.text("date")},
          {"seed", fc.cfg.integer("seed")}};
}

ojson fixture_doc(const std::string& name, ojson prov, double tol, double floor, ojson values) {
  ojson j;
  j["fixture"] = name;
  j["provenance"] = std::move(prov);
  j["convention"] = kConvention;
  j["tolerance"] = tol;
  j["tolerance_floor"] = floor;
  j["values"] = std::move(values);
  return j;
}

[[noreturn]] void oracle_abort(const std::string& fixture, const std::vector<std::string>& lines) {
  std::string msg = "oracle disagreement in " + fixture + ":\n";
  for (const auto& l : lines) msg += "  " + l + "\n";
  throw CalibrationMismatch(msg);
}

// Closed-form Gram entries against tensor Gauss-Legendre in polar coordinates.
// Errors are measured against sqrt(G[m][m] G[n][n]) since entries with
// m - n a multiple of 2 pi / L vanish.
ojson fixture_gram(const FixtureContext& fc) {
  const int q = 48 * fc.scale;
  const ArcInterval arc(0, kPi / 2);
  const double T = std::log(2.0);
  const int N = 20;
  ojson values;
  std::vector<std::string> bad;
  for (Side side : {Side::Exterior, Side::Interior}) {
    const AnnularSector s(side, T, arc);
    const Eigen::MatrixXcd G = monomial_gram(BergmanDomain::sector(s), N);
    const QuadratureRule rr = gauss_legendre(q, s.r_min(), s.r_max());
    const QuadratureRule rt = gauss_legendre(q, arc.theta1(), arc.theta2());
    Eigen::MatrixXcd Q(N + 1, N + 1);
    for (int m = 0; m <= N; ++m)
      for (int n = 0; n <= N; ++n) {
        cplx acc = 0;
        for (size_t a = 0; a < rr.nodes.size(); ++a)
          for (size_t b = 0; b < rt.nodes.size(); ++b)
            acc += rr.weights[a] * rt.weights[b] * std::pow(rr.nodes[a], m + n + 1) *
                   std::polar(1.0, (m - n) * rt.nodes[b]);
        Q(m, n) = acc;
      }
    ojson diag = ojson::array(), entries = ojson::array();
    double worst = 0;
    for (int m = 0; m <= N; ++m) diag.push_back(Q(m, m).real());
    for (int m = 0; m <= N; ++m)
      for (int n = 0; n <= N; ++n) {
        const double scale = std::sqrt(G(m, m).real() * G(n, n).real());
        const double err = std::abs(Q(m, n) - G(m, n)) / scale;
        worst = std::max(worst, err);
        if (err > 1e-10)
          bad.push_back(std::string(to_string(side)) + " G[" + std::to_string(m) + "][" +
                        std::to_string(n) + "] normalized error " + format_real(err));
        const cplx v = Q(m, n) / std::sqrt(Q(m, m).real() * Q(n, n).real());
        entries.push_back({m, n, v.real(), v.imag()});
      }
    values[to_string(side)] = {{"T", T},
                               {"arc", {arc.theta1(), arc.theta2()}},
                               {"N", N},
                               {"G00", Q(0, 0).real()},
                               {"diagonal", diag},
                               {"normalized_entries", entries},
                               {"max_normalized_error_below_1e-10", worst <= 1e-10}};
  }
  if (!bad.empty()) oracle_abort("gram_quadrature", bad);
  // Diagonal entries compare relatively; normalized entries (|v| <= 1) absolutely.
  return fixture_doc("gram_quadrature",
                     provenance(fc, "tensor Gauss-Legendre quadrature in polar coordinates",
                                {{"nodes_per_direction", q}}),
                     1e-10, 1.0, values);
}

ojson constants_json(const CoefficientSource& src, const AnnularSector& s, const std::vector<int>& orders,
                     const GrowthThresholds& th) {
  const auto rep = observability_report(src, s, orders, th);
  return {{"state", src.name()},
          {"side", to_string(s.side())},
          {"T", s.T()},
          {"orders", orders},
          {"constants", rep.constants},
          {"ratios_per_doubling", rep.growth.ratios},
          {"verdict", to_string(rep.growth.verdict)}};
}

ojson fixture_growth(const FixtureContext& fc) {
  const GrowthThresholds th = thresholds_of(fc.cfg);
  const ArcInterval arc(0, kPi / 2);
  const AnnularSector ext(Side::Exterior, 1.0, arc), in(Side::Interior, 1.0, arc);
  ojson values;
  values["thresholds"] = {{"plateau", th.plateau}, {"diverging", th.diverging}};
  values["triangle"] = constants_json(CoefficientSource::triangle(kPi / 8, kPi / 4), ext,
                                      {8, 16, 32, 48, 64}, th);
  ojson probes = ojson::array();
  const std::vector<cplx> us = {std::polar(0.8, kPi / 4), std::polar(0.6, kPi / 3),
                                std::polar(0.8, -kPi / 4), std::polar(0.2, kPi / 4)};
  std::vector<std::string> bad;
  for (cplx u : us) {
    ojson p = constants_json(CoefficientSource::kernel(u), in, {8, 16, 32, 48}, th);
    const bool inside = in.contains(u);
    p["u"] = {u.real(), u.imag()};
    p["inside"] = inside;
    const std::string want = inside ? "bounded-plateau" : "diverging";
    if (p["verdict"] != want)
      bad.push_back("probe u = " + format_real(u.real()) + "," + format_real(u.imag()) + ": verdict " +
                    p["verdict"].get<std::string>() + ", membership says " + want);
    probes.push_back(p);
  }
  values["reach_probes"] = probes;
  if (!bad.empty()) oracle_abort("growth", bad);
  return fixture_doc("growth",
                     provenance(fc, "multiprecision Rayleigh quotient with cross-precision agreement",
                                {{"orders", "8,16,32,48,64"}}),
                     1e-6, 1e-12, values);
}

ojson fixture_kernel05(const FixtureContext& fc) {
  const GrowthThresholds th = thresholds_of(fc.cfg);
  const AnnularSector ext(Side::Exterior, 1.0, ArcInterval(0, kPi / 2));
  const std::vector<int> orders = {8, 16, 32, 48};
  ojson j = fixture_doc("kernel05",
                        provenance(fc, "multiprecision Rayleigh quotient with cross-precision agreement",
                                   {{"orders", "8,16,32,48"}}),
                        1e-6, 1e-12, constants_json(CoefficientSource::kernel(0.5), ext, orders, th));
  // Input block read by `observe --input`.
  j["config"] = {{"state", "kernel"},
                 {"u", "0.5,0"},
                 {"side", "exterior"},
                 {"T", "1"},
                 {"theta1", "0"},
                 {"theta2", format_real(kPi / 2)},
                 {"orders", "8,16,32,48"}};
  return j;
}

ojson synthesis_rows(ControlSystem sys, const CircleFunction& f0, const ArcInterval& arc,
                     const std::vector<double>& eps, int steps) {
  SynthesisOptions opt;
  opt.steps = steps;
  ojson rows = ojson::array();
  for (const auto& r : epsilon_sweep(sys, f0, 1.0, arc, 32, eps, opt))
    rows.push_back({{"epsilon", r.epsilon},
                    {"residual", r.residual},
                    {"control_norm", r.control_norm},
                    {"mean_residual", r.mean_residual}});
  return rows;
}

ojson fixture_hum(const FixtureContext& fc) {
  const ArcInterval arc(0, kPi / 2);
  const int steps = 512 * fc.scale;
  const std::vector<double> eps = {1e-4, 1e-6, 1e-8, 1e-10};
  const HardyFunction bump = CoefficientSource::poly_bump(kPi / 4, 0.9 * kPi / 4, 4).to_hardy(32);
  const CircleFunction k05 = CoefficientSource::kernel(0.5).to_hardy(32).to_circle();
  ojson values;
  values["N"] = 32;
  values["T"] = 1.0;
  values["epsilons"] = eps;
  for (ControlSystem sys : {ControlSystem::H2, ControlSystem::L2}) {
    const CircleFunction f0 = sys == ControlSystem::H2 ? bump.to_circle() : real_series(bump);
    values[std::string("bump_") + to_string(sys)] = synthesis_rows(sys, f0, arc, eps, steps);
    values[std::string("kernel05_") + to_string(sys)] = synthesis_rows(sys, k05, arc, eps, steps);
  }
  {
    SynthesisOptions so;
    so.steps = steps;
    const unsigned seed = static_cast<unsigned>(fc.cfg.integer("seed"));
    values["minimality_defect"] = {
        {"h2", minimality_defect(synthesize_h2(bump, 1.0, arc, 32, 1e-8, so).control, 50, seed)},
        {"l2", minimality_defect(synthesize_l2(real_series(bump), 1.0, arc, 32, 1e-8, so).control, 50, seed)}};
  }
  CostSweepOptions opt;
  opt.steps = steps;
  const CostSweep cs = cost_vs_time_sweep(bump, {4, 2, 1, 0.5, 0.25, 0.125}, arc, opt);
  ojson rows = ojson::array();
  for (const auto& r : cs.rows)
    rows.push_back({{"horizon", r.horizon}, {"epsilon", r.epsilon}, {"residual", r.residual},
                    {"control_norm", r.control_norm}, {"ok", r.ok}});
  values["cost_sweep"] = {{"rows", rows}, {"slope", cs.slope}};
  return fixture_doc("hum_eps",
                     provenance(fc, "exact-decay time stepping of the synthesized control",
                                {{"steps", steps}}),
                     5e-2, 1e-6, values);
}

ojson fixture_dz(const FixtureContext& fc) {
  const ArcInterval arc(0, kPi / 2);
  const AnnularSector ext(Side::Exterior, 1.0, arc);
  const int K = 256 * fc.scale;
  ojson values;
  const RectangleHarmonic mode{ext.T(), arc.theta1(), arc.length(), {cplx(1)}};
  const double sm = dw_norm_squared(mode, 0, ext.T()), exact = single_mode_exact(ext);
  if (std::abs(sm - exact) > 1e-8) oracle_abort("dz_sequences", {"single mode " + format_real(sm) +
                                                                  " vs closed form " + format_real(exact)});
  values["single_mode"] = {{"dw_norm_squared", sm}, {"closed_form", exact}};
  for (const auto& g : fixture_corpus(arc)) {
    if (g.support_residual(arc) > 1e-10 * std::max(g.l2_norm(), 1e-300)) continue;
    const DzNormReport dz = dz_norm_diagnostic(rectangle_harmonic_extension(g, ext, K));
    values[g.name()] = {{"deltas", dz.deltas},
                        {"norms", dz.norms},
                        {"increments", dz.increments},
                        {"verdict", to_string(dz.verdict)}};
  }
  return fixture_doc("dz_sequences",
                     provenance(fc, "closed-form phi integration with graded Gauss-Legendre in s",
                                {{"sine_modes", K}}),
                     1e-2, 1e-10, values);
}

ojson fixture_friedrichs(const FixtureContext& fc) {
  const AnnularSector q(Side::Interior, std::log(2.0), ArcInterval(0, kPi / 2));
  const BergmanDomain dom = BergmanDomain::sector(q);
  ojson values;
  ojson rows = ojson::array();
  std::mt19937_64 rng(static_cast<unsigned>(fc.cfg.integer("seed")));
  std::normal_distribution<double> nd;
  std::vector<std::string> bad;
  for (int N : {8, 16, 24, 32}) {
    const FriedrichsResult r = friedrichs_constant(dom, N);
    Eigen::MatrixXcd M, B;
    friedrichs_forms(dom, N, M, B);
    // Random Rayleigh quotients give a lower bound.
    double lower = 0;
    for (int s = 0; s < 2000; ++s) {
      Eigen::VectorXcd c(N);
      for (int i = 0; i < N; ++i) c(i) = cplx(nd(rng), nd(rng));
      lower = std::max(lower, std::abs((c.transpose() * B * c)(0, 0)) / c.dot(M * c).real());
    }
    if (lower > r.theta * (1 + 1e-10))
      bad.push_back("N = " + std::to_string(N) + ": sampled quotient " + format_real(lower) +
                    " exceeds theta " + format_real(r.theta));
    rows.push_back({{"N", N}, {"theta", r.theta}, {"sampled_lower_bound_below_theta", lower <= r.theta * (1 + 1e-10)}});
  }
  if (!bad.empty()) oracle_abort("friedrichs", bad);
  values["quarter_ring_interior"] = rows;
  values["disk_theta"] = friedrichs_constant(BergmanDomain::unit_disk(), 16).theta;
  return fixture_doc("friedrichs",
                     provenance(fc, "random Rayleigh quotients as a lower bound", {{"samples", 2000}}),
                     1e-9, 1e-12, values);
}

ojson fixture_sepsing(const FixtureContext& fc) {
  ExperimentConfig c = fc.cfg;
  const ojson j = sepsing_json(c, fc.scale);
  ojson values;
  values["pole"] = j["pole"];
  values["two_disk_plateau_violations"] = j["two_disk_cutoff"]["plateau_violations"];
  values["two_disk_gradient_within_bound"] =
      j["two_disk_cutoff"]["grad_max"].get<double>() <= j["two_disk_cutoff"]["grad_bound"].get<double>();
  values["epsilon"] = j["refinement"].back()["cutoff"]["epsilon"];
  values["sup_b1_finest"] = j["refinement"].back()["sup_b1"];
  values["C_R_finest"] = j["refinement"].back()["C_R"];
  auto all_at_least = [](const ojson& v, double t) {
    return std::all_of(v.begin(), v.end(), [t](const ojson& x) { return x.get<double>() >= t; });
  };
  values["dbar_reduction_b1_at_least_1.5"] = all_at_least(j["dbar_reduction_b1"], 1.5);
  values["dbar_reduction_b2_at_least_1.5"] = all_at_least(j["dbar_reduction_b2"], 1.5);
  ojson res = ojson::array();
  for (const auto& r : j["refinement"]) res.push_back(r["nx"]);
  return fixture_doc("sepsing", provenance(fc, "grid refinement study", {{"grids", res}}), 0.25, 1e-12,
                     values);
}

using FixtureFn = ojson (*)(const FixtureContext&);
const std::vector<std::pair<std::string, FixtureFn>>& fixture_table() {
  static const std::vector<std::pair<std::string, FixtureFn>> t = {
      {"gram_quadrature", fixture_gram}, {"growth", fixture_growth},
      {"kernel05", fixture_kernel05},    {"hum_eps", fixture_hum},
      {"dz_sequences", fixture_dz},      {"friedrichs", fixture_friedrichs},
      {"sepsing", fixture_sepsing},
  };
  return t;
}

ExperimentOutput cmd_calibrate(ExperimentConfig c) {
  std::vector<std::string> only;
  if (!c.text("only").empty()) {
    std::stringstream ss(c.text("only"));
    for (std::string s; std::getline(ss, s, ',');) only.push_back(s);
    for (const auto& s : only) {
      const auto& t = fixture_table();
      require(std::any_of(t.begin(), t.end(), [&](const auto& e) { return e.first == s; }),
              "unknown fixture '" + s + "'");
    }
  }
  const FixtureContext fc{c, static_cast<int>(c.integer("resolution_scale"))};
  const fs::path dir = c.text("fixtures");
  const bool check = c.flag("check");
  ExperimentOutput o;
  std::vector<std::string> diffs;
  for (const auto& [name, fn] : fixture_table()) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const std::string text = fn(fc).dump(2) + "\n";
    const fs::path path = dir / (name + ".json");
    if (check) {
      if (!fs::exists(path)) {
        diffs.push_back(path.string() + ": missing");
        continue;
      }
      const auto d = fixture_diff(read_file(path.string()), text);
      for (const auto& line : d) diffs.push_back(path.string() + ": " + line);
      o.primary += (d.empty() ? "ok " : "MISMATCH ") + path.string() + "\n";
    } else {
      write_file(path, text);
      o.primary += "wrote " + path.string() + "\n";
    }
    o.artifacts.push_back({name + ".json", text});
  }
  if (!diffs.empty()) {
    std::string report = "calibration check failed:\n";
    for (const auto& d : diffs) report += "  " + d + "\n";
    throw CalibrationMismatch(report);
  }
  o.resolved = c;
  return o;
}

// ------------------------------------------------------------------ diff

void diff_rec(const ojson& a, const ojson& b, const std::string& path, double tol, double floor,
              std::vector<std::string>& out) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({std::abs(x), std::abs(y), floor});
    if (!(std::abs(x - y) <= tol * scale))
      out.push_back(path + ": expected " + format_real(x) + ", got " + format_real(y));
    return;
  }
  if (a.type() != b.type()) {
    out.push_back(path + ": expected " + a.dump() + ", got " + b.dump());
    return;
  }
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (path.empty() && k == "provenance") continue;
      if (!b.contains(k)) {
        out.push_back(path + "/" + k + ": missing");
        continue;
      }
      diff_rec(v, b[k], path + "/" + k, tol, floor, out);
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) out.push_back(path + "/" + k + ": unexpected");
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
      return;
    }
    for (size_t i = 0; i < a.size(); ++i) diff_rec(a[i], b[i], path + "/" + std::to_string(i), tol, floor, out);
    return;
  }
  if (a != b) out.push_back(path + ": expected " + a.dump() + ", got " + b.dump());
}

}  // namespace

std::vector<std::string> fixture_diff(const std::string& expected, const std::string& actual) {
  const ojson a = ojson::parse(expected, nullptr, false), b = ojson::parse(actual, nullptr, false);
  if (a.is_discarded()) return {"expected document is not valid JSON"};
  if (b.is_discarded()) return {"actual document is not valid JSON"};
  const double tol = a.value("tolerance", 0.0), floor = a.value("tolerance_floor", 0.0);
  std::vector<std::string> out;
  diff_rec(a, b, "", tol, floor, out);
  return out;
}

std::string TableArtifact::to_text(char sep) const {
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) out += (i ? std::string(1, sep) : "") + columns[i];
  out += "\n";
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw ValidationError("table row width differs from the header");
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += (i ? std::string(1, sep) : "") + buf;
    }
    out += "\n";
  }
  return out;
}

TableArtifact TableArtifact::parse(const std::string& text) {
  TableArtifact t;
  std::istringstream in(text);
  std::string line;
  auto tokens = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream ls(s);
    std::vector<std::string> v;
    for (std::string w; ls >> w;) v.push_back(w);
    return v;
  };
  if (!std::getline(in, line)) throw ValidationError("empty table");
  t.columns = tokens(line);
  while (std::getline(in, line)) {
    const auto w = tokens(line);
    if (w.empty()) continue;
    if (w.size() != t.columns.size()) throw ValidationError("table row width differs from the header");
    std::vector<double> row;
    for (const auto& s : w) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end) throw ValidationError("table entry is not a number: " + s);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> c = {"figure2",  "gram",    "observe",    "reach",
                                             "synthesize", "classify", "cns",      "friedrichs",
                                             "sepsing",  "cost-sweep", "calibrate"};
  return c;
}

ExperimentOutput run_experiment(const std::string& command, const ExperimentConfig& cfg) {
  cfg.validate();
  static const std::map<std::string, std::function<ExperimentOutput(ExperimentConfig)>> table = {
      {"figure2", cmd_figure2},
      {"gram", cmd_gram},
      {"observe", [](ExperimentConfig c) { return cmd_constants(std::move(c), Side::Exterior); }},
      {"reach", [](ExperimentConfig c) { return cmd_constants(std::move(c), Side::Interior); }},
      {"synthesize", cmd_synthesize},
      {"classify", cmd_classify},
      {"cns", cmd_cns},
      {"friedrichs", cmd_friedrichs},
      {"sepsing", cmd_sepsing},
      {"cost-sweep", cmd_cost_sweep},
      {"calibrate", cmd_calibrate},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ValidationError("unknown command '" + command + "'");
  ExperimentOutput o = it->second(cfg);
  o.artifacts.push_back({command + ".config", o.resolved.to_text()});
  if (!cfg.text("out").empty()) {
    const fs::path dir = cfg.text("out");
    for (const auto& a : o.artifacts) write_file(dir / a.name, a.data);
  }
  return o;
}

}  // namespace hh
