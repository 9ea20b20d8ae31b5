// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "noether/catalog.hpp"
#include "noether/cli.hpp"
#include "noether/flow.hpp"
#include "noether/integrability.hpp"
#include "noether/noether.hpp"
#include "noether/sampling.hpp"
#include "support.hpp"

using namespace noether;
using testing_support::all_entries;
using testing_support::kepler_star;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<PhasePoint> points_for(const CatalogEntry& e) {
  return testing_support::domain_points(e, 100, 20261014, 1e-3);
}

Line criterion1() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const CatalogEntry& e : all_entries()) {
    const auto pts = points_for(e);
    for (const auto& [name, F] : e.spec.integrals) {
      for (const PhasePoint& x : pts) {
        const double f = F.value(x, e.spec.params);
        const double c = pc_contract(e.spec, inverse_noether(e.spec, F, x), x);
        worst = std::max(worst, std::abs(c - f) / (1.0 + std::abs(f)));
      }
    }
  }
  const double t = seconds_since(start);
  return {1, "inverse-Noether identity i_zeta alpha = F", worst <= 1e-12 && t < 1.0,
          "max_rel=" + fmt("%.3g", worst) + " (tol 1e-12), runtime=" + fmt("%.3f", t) +
              "s (limit 1s)"};
}

Line criterion2() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const CatalogEntry& e : all_entries()) {
    const auto pts = points_for(e);
    for (const auto& [name, F] : e.spec.integrals) {
      const SymmetryCandidate zeta = SymmetryCandidate::from_integral(e.spec, name, F);
      for (const PhasePoint& x : pts) worst = std::max(worst, symmetry_residuals(e.spec, zeta, x).max_rel);
    }
  }
  const double t = seconds_since(start);
  return {2, "symmetry conditions of derived symmetries", worst <= 1e-9 && t < 5.0,
          "max_rel=" + fmt("%.3g", worst) + " (tol 1e-9), runtime=" + fmt("%.3f", t) +
              "s (limit 5s)"};
}

Line criterion3() {
  const CatalogEntry k = builtin("kepler");
  SamplingOptions opts = k.domain;
  opts.guard = [](const PhasePoint& x) { return std::hypot(x.q[0], x.q[1]) > 0.1; };
  opts.min_abs_rho = 0.1;
  const auto pts = sample_points(k.spec, 100, 20261014, opts);
  const double mu = k.spec.params.at("mu");
  double worst = 0.0;
  for (int idx = 1; idx <= 2; ++idx) {
    const Expression& a = k.spec.integrals.at("A" + std::to_string(idx));
    for (const PhasePoint& x : pts) {
      worst = std::max(worst, testing_support::max_rel_err(inverse_noether(k.spec, a, x).flat(),
                                                           kepler_reference_symmetry(idx, x, mu).flat()));
    }
  }
  const FieldValue z = inverse_noether(k.spec, k.spec.integrals.at("A1"), kepler_star());
  const double spot = (z - FieldValue(-4.0 / 3, {0, 2.0 / 3}, {1.0 / 3, 0})).max_norm();
  return {3, "Kepler oracle against the closed-form Runge-Lenz symmetries",
          worst <= 1e-12 && spot <= 1e-15,
          "max_rel=" + fmt("%.3g", worst) + " (tol 1e-12), spot |zeta1(x*) - (-4/3,(0,2/3),(1/3,0))|=" +
              fmt("%.3g", spot)};
}

Line criterion4() {
  double worst_char = 0.0, worst_sym = 0.0;
  std::size_t arcs = 0, singular = 0;
  for (const CatalogEntry& e : all_entries()) {
    const auto starts = testing_support::resolved_starts(e, 5, 404);
    for (const auto& [name, F] : e.spec.integrals) {
      const SymmetryCandidate zeta = SymmetryCandidate::from_integral(e.spec, name, F);
      const auto J = [&](const PhasePoint& p) { return noether_integral(e.spec, zeta, std::nullopt, p); };
      for (const PhasePoint& x0 : starts) {
        worst_char = std::max(worst_char,
                              conservation_drift(J, integrate_characteristic(e.spec, x0, 1.0, 1e-3)));
        ++arcs;
        const Trajectory flow = flow_symmetry(e.spec, zeta, x0, 0.01, 1e-4);
        double rho_min = 1e300;
        for (const PhasePoint& s : flow.samples) rho_min = std::min(rho_min, std::abs(elementary_action(e.spec, s)));
        if (rho_min < 0.1) {
          ++singular;
          continue;
        }
        worst_sym = std::max(worst_sym, conservation_drift(J, flow));
      }
    }
  }
  return {4, "conservation of Noether integrals", worst_char <= 1e-10 && worst_sym <= 1e-9,
          "characteristic drift=" + fmt("%.3g", worst_char) + " (tol 1e-10), symmetry-flow drift=" +
              fmt("%.3g", worst_sym) + " (tol 1e-9), arcs=" + std::to_string(arcs) +
              ", symmetry flows skipped near rho=0: " + std::to_string(singular)};
}

Line criterion5() {
  double worst = 0.0;
  for (const CatalogEntry& e : all_entries()) {
    const SymmetryCandidate z = SymmetryCandidate::characteristic(e.spec);
    const auto pts = testing_support::domain_points(e, 20, 55, 1e-3);
    for (const auto& [name, F] : e.spec.integrals) {
      const SymmetryCandidate zeta = SymmetryCandidate::from_integral(e.spec, name, F);
      for (const PhasePoint& x : pts) {
        worst = std::max(worst, kernel_membership(e.spec, lie_bracket(e.spec, z, zeta, x), x));
      }
    }
  }
  const CatalogEntry osc = builtin("harmonic");
  const SymmetryCandidate z = SymmetryCandidate::characteristic(osc.spec);
  const SymmetryCandidate shift = SymmetryCandidate::explicit_field(osc.spec, "d/dq1", "0", {"1"}, {"0"});
  double control = 1e300;
  for (const PhasePoint& x : testing_support::domain_points(osc, 20, 55, 1e-3)) {
    control = std::min(control, kernel_membership(osc.spec, lie_bracket(osc.spec, z, shift, x), x));
  }
  return {5, "[Z, zeta] lies in the characteristic kernel", worst <= 1e-6 && control >= 1e-2,
          "max kernel defect=" + fmt("%.3g", worst) + " (tol 1e-6), negative control min=" +
              fmt("%.3g", control) + " (need >= 1e-2)"};
}


Line criterion6() {
  struct Case {
    std::string system;
    std::function<SymmetryCandidate(const SystemSpec&)> field;
    std::function<WeakData(const SystemSpec&)> data;
  };
  const auto d_dt = [](const SystemSpec& s) {
    std::vector<std::string> zeros(s.n, "0");
    return SymmetryCandidate::explicit_field(s, "d/dt", "1", zeros, zeros);
  };
  const auto boost = [](const SystemSpec& s) {
    std::vector<std::string> xi(s.n, "0"), eta(s.n, "0");
    xi[0] = "t";
    eta[0] = "1";
    return SymmetryCandidate::explicit_field(s, "boost", "0", xi, eta);
  };
  const std::vector<Case> cases = {
      {"harmonic", d_dt, [](const SystemSpec& s) { return WeakData{Perturbation::dt(s.n, 0.35), std::nullopt}; }},
      {"kepler", d_dt, [](const SystemSpec& s) { return WeakData{Perturbation::dt(s.n, -0.2), std::nullopt}; }},
      {"kepler", d_dt,
       [](const SystemSpec& s) { return WeakData{Perturbation::exact(s.parse("t*q1")), s.parse("q1")}; }},
      {"free1d", boost, [](const SystemSpec& s) { return WeakData{Perturbation::none(s.n), s.parse("q1")}; }},
      {"free2d", boost, [](const SystemSpec& s) { return WeakData{Perturbation::none(s.n), s.parse("q1")}; }},
  };
  double worst_res = 0.0, worst_j = 0.0, worst_drift = 0.0;
  for (const Case& c : cases) {
    const CatalogEntry e = builtin(c.system);
    const SymmetryCandidate zeta = c.field(e.spec);
    const WeakData weak = c.data(e.spec);
    const SymmetryCandidate strong = weak_to_strong_candidate(e.spec, zeta, weak);
    for (const PhasePoint& x : testing_support::domain_points(e, 20, 66, 1e-3)) {
      worst_res = std::max(worst_res, symmetry_residuals(e.spec, strong, x).max_rel);
      const double jw = noether_integral(e.spec, zeta, weak, x);
      const double js = noether_integral(e.spec, strong, std::nullopt, x);
      worst_j = std::max(worst_j, std::abs(jw - js) / (1.0 + std::abs(jw)));
    }
    const auto J = [&](const PhasePoint& p) { return noether_integral(e.spec, zeta, weak, p); };
    for (const PhasePoint& x0 : testing_support::resolved_starts(e, 3, 67)) {
      worst_drift = std::max(worst_drift, conservation_drift(J, integrate_characteristic(e.spec, x0, 1.0, 1e-3)));
      worst_drift = std::max(worst_drift, conservation_drift(J, flow_symmetry(e.spec, strong, x0, 0.01, 1e-4)));
    }
  }
  return {6, "weak-to-strong conversion", worst_res <= 1e-8 && worst_j <= 1e-9 && worst_drift <= 1e-9,
          "residual max_rel=" + fmt("%.3g", worst_res) + " (tol 1e-8), |J_weak - J_strong|=" +
              fmt("%.3g", worst_j) + ", drift=" + fmt("%.3g", worst_drift) + " (tol 1e-9), cases=" +
              std::to_string(cases.size())};
}

Line criterion7() {
  const CatalogEntry k = builtin("kepler");
  const auto pts = testing_support::domain_points(k, 20, 7007, 0.1);
  std::vector<SymmetryCandidate> syms;
  std::vector<Expression> ints;
  for (const char* n : {"H", "L"}) {
    syms.push_back(SymmetryCandidate::from_integral(k.spec, n, k.spec.integrals.at(n)));
    ints.push_back(k.spec.integrals.at(n));
  }
  const IntegrabilityReport rep = integrability_report(k.spec, syms, ints, 2, pts);
  const auto generic = testing_support::domain_points(k, 10, 7008, 0.1);
  std::vector<Expression> three = {k.spec.integrals.at("H"), k.spec.integrals.at("L"), k.spec.integrals.at("A1")};
  std::vector<Expression> four = three;
  four.push_back(k.spec.integrals.at("A2"));
  const std::size_t rank3 = independence_rank(k.spec, three, generic).rank;
  const std::size_t rank4 = independence_rank(k.spec, four, generic).rank;
  const bool pass = rep.commutation.max_residual <= 1e-6 && rep.independence.rank == 2 &&
                    rep.invariance.max_abs.max_abs() <= 1e-8 && rep.hypotheses_hold() && rank3 == 3 &&
                    rank4 == 3;
  return {7, "integrability hypotheses for Kepler", pass,
          "bracket=" + fmt("%.3g", rep.commutation.max_residual) + " (tol 1e-6), rank{H,L}=" +
              std::to_string(rep.independence.rank) + ", invariance=" +
              fmt("%.3g", rep.invariance.max_abs.max_abs()) + " (tol 1e-8), rank{H,L,A1}=" +
              std::to_string(rank3) + ", rank{H,L,A1,A2}=" + std::to_string(rank4)};
}

Line criterion8() {
  const SystemSpec k = builtin("kepler").spec;
  const Trajectory arc = integrate_characteristic(k, kepler_star(), 1.0, 1e-3);
  FieldValue dir = FieldValue::zero(2);
  dir.xi = {1.0, 1.0};
  const std::vector<double> amps = {-1e-2, -1e-3, 1e-3, 1e-2};
  const StationarityResult good = stationarity_probe(k, arc, bump_profile(dir), amps);

  const SystemSpec h = builtin("harmonic").spec;
  Trajectory line;
  line.step = 1e-3;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 1e-3;
    line.samples.emplace_back(t, std::vector<double>{1.0 + t}, std::vector<double>{0.5});
  }
  FieldValue d1 = FieldValue::zero(1);
  d1.xi = {1.0};
  const StationarityResult bad = stationarity_probe(h, line, bump_profile(d1), amps);
  const bool pass = std::abs(good.slope) <= 1e-6 && std::abs(good.curvature) > 1e-3 &&
                    std::abs(bad.slope) >= 1e-3;
  return {8, "action is stationary on true trajectories", pass,
          "arc slope=" + fmt("%.3g", good.slope) + " (tol 1e-6), curvature=" + fmt("%.3g", good.curvature) +
              ", straight-line slope=" + fmt("%.3g", bad.slope) + " (need >= 1e-3)"};
}

double oscillator_error(double step) {
  const Trajectory tr = integrate_characteristic(builtin("harmonic").spec, PhasePoint(0, {1}, {0}), 1.0, step);
  const PhasePoint& e = tr.samples.back();
  return std::hypot(e.q[0] - std::cos(1.0), e.p[0] + std::sin(1.0));
}

Line criterion9() {
  double worst = 0.0;
  for (const CatalogEntry& e : all_entries()) {
    std::vector<Expression> exprs{e.spec.hamiltonian};
    for (const auto& [name, expr] : e.spec.integrals) exprs.push_back(expr);
    for (const PhasePoint& x : points_for(e)) {
      for (const Expression& ex : exprs) {
        worst = std::max(worst, testing_support::max_rel_err(fd_jet(ex, x, e.spec.params).gradient,
                                                             eval_jet(ex, x, e.spec.params, 1).gradient));
      }
    }
  }
  const double e1 = oscillator_error(1e-2), e2 = oscillator_error(5e-3), e3 = oscillator_error(2.5e-3);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool pass = worst <= 1e-6 && r1 >= 8 && r1 <= 32 && r2 >= 8 && r2 <= 32;
  return {9, "numerics hygiene (AD vs FD, RK4 order)", pass,
          "AD/FD max_rel=" + fmt("%.3g", worst) + " (tol 1e-6), error ratios=" + fmt("%.2f", r1) + ", " +
              fmt("%.2f", r2) + " (need 16 within factor 2)"};
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "noether");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  cli::RunConfig config;
  std::ostringstream out, err;
  if (auto c = cli::parse_command_line(static_cast<int>(argv.size()), argv.data(), config, out, err)) {
    code = *c;
  } else {
    code = cli::run(config, out, err);
  }
  return out.str();
}

Line criterion10() {
  const std::vector<std::vector<std::string>> configs = {
      {"verify", "--system", "kepler", "--samples", "30", "--seed", "7"},
      {"integrability", "--system", "kepler", "--integral", "H,L", "--samples", "15", "--seed", "99"},
      {"derive", "--system", "kepler", "--integral", "A1", "--point", "0,1,0,0,1"},
      {"flow", "--system", "harmonic", "--point", "0,1,0", "--duration", "1"},
  };
  bool same = true;
  std::size_t bytes = 0;
  for (const auto& c : configs) {
    int code_a = 0, code_b = 0;
    const std::string a = run_cli(c, code_a);
    const std::string b = run_cli(c, code_b);
    same = same && !a.empty() && a == b && code_a == 0 && code_b == 0;
    bytes += a.size();
  }
  return {10, "byte-identical JSON for identical config and seed", same,
          std::to_string(configs.size()) + " configurations, " + std::to_string(bytes) + " bytes compared"};
}

}  // namespace

int main() {
  const std::vector<std::function<Line()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  int failures = 0;
  for (const auto& c : criteria) {
    Line l;
    try {
      l = c();
    } catch (const std::exception& e) {
      l = {0, "exception", false, e.what()};
    }
    if (!l.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s\n", l.id, l.pass ? "PASS" : "FAIL", l.name.c_str(), l.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
