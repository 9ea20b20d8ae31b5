#include <doctest.h>

#include "noether/errors.hpp"
#include "noether/integrability.hpp"
#include "support.hpp"

using namespace noether;
using testing_support::kepler_star;

namespace {

SymmetryCandidate field(const SystemSpec& sys, const std::string& tau,
                        const std::vector<std::string>& xi, const std::vector<std::string>& eta) {
  return SymmetryCandidate::explicit_field(sys, "f", tau, xi, eta);
}

std::vector<SymmetryCandidate> derived(const SystemSpec& sys, const std::vector<std::string>& names) {
  std::vector<SymmetryCandidate> out;
  for (const auto& n : names) out.push_back(SymmetryCandidate::from_integral(sys, n, sys.integrals.at(n)));
  return out;
}

std::vector<Expression> exprs(const SystemSpec& sys, const std::vector<std::string>& names) {
  std::vector<Expression> out;
  for (const auto& n : names) out.push_back(sys.integrals.at(n));
  return out;
}

std::vector<PhasePoint> kepler_points(std::size_t count, std::uint64_t seed) {
  return testing_support::domain_points(builtin("kepler"), count, seed, 0.1);
}

}  // namespace

TEST_CASE("commuting adjustment") {
  const SystemSpec h = builtin("harmonic").spec;
  const PhasePoint x(0.4, {0.7}, {-0.2});
  const FieldValue a = commuting_adjust(h, field(h, "1", {"0"}, {"0"}), x);
  CHECK(a.tau == 0.0);
  CHECK(a.xi[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(a.eta[0] == doctest::Approx(0.7).epsilon(1e-15));

  const SymmetryCandidate flat = field(h, "0", {"q1*p1"}, {"t"});
  CHECK(commuting_adjust(h, flat, x) == flat(x));

  const SystemSpec k = builtin("kepler").spec;
  const FieldValue z1 = commuting_adjust(k, derived(k, {"A1"}).front(), kepler_star());
  CHECK(z1.tau == 0.0);
  CHECK((z1 - FieldValue(0, {0, 2}, {-1, 0})).max_norm() <= 1e-15);
  for (const PhasePoint& p : kepler_points(50, 8)) {
    for (const auto& s : derived(k, {"H", "L", "A1", "A2"})) CHECK(commuting_adjust(k, s, p).tau == 0.0);
  }
}

TEST_CASE("commutation report") {
  const CatalogEntry osc = builtin("harmonic");
  const auto opts = testing_support::domain_points(osc, 10, 1, 0.1);
  const CommutationReport r1 =
      commutation_report(osc.spec, {field(osc.spec, "1", {"0"}, {"0"})}, 1, opts);
  CHECK(r1.max_residual <= 1e-8);

  const CatalogEntry fr = builtin("free2d");
  const auto fpts = testing_support::domain_points(fr, 10, 1, 0.1);
  const std::vector<SymmetryCandidate> trans = {field(fr.spec, "0", {"1", "0"}, {"0", "0"}),
                                                field(fr.spec, "0", {"0", "1"}, {"0", "0"})};
  const CommutationReport r2 = commutation_report(fr.spec, trans, 2, fpts);
  CHECK(r2.max_residual <= 1e-10);
  CHECK(r2.brackets.rows == 2);
  CHECK(r2.brackets.cols == 2);
  CHECK(r2.z_brackets.size() == 2);

  const std::vector<SymmetryCandidate> bad = {field(fr.spec, "0", {"1", "0"}, {"0", "0"}),
                                              field(fr.spec, "0", {"0", "q1"}, {"0", "0"})};
  const CommutationReport r3 = commutation_report(fr.spec, bad, 2, fpts);
  CHECK(r3.brackets(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3.brackets(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3.kernel_defects(0, 1) > 0.5);

  CHECK_THROWS_AS(commutation_report(fr.spec, trans, 3, fpts), Error);
}

TEST_CASE("independence rank") {
  const SystemSpec k = builtin("kepler").spec;
  const auto pts = kepler_points(10, 4);
  const IndependenceResult r3 = independence_rank(k, exprs(k, {"H", "L", "A1"}), pts);
  CHECK(r3.rank == 3);
  const IndependenceResult r4 = independence_rank(k, exprs(k, {"H", "L", "A1", "A2"}), pts);
  CHECK(r4.rank == 3);
  const IndependenceResult rh =
      independence_rank(k, {k.integrals.at("H"), k.parse("2*((p1^2+p2^2)/2 - mu/sqrt(q1^2+q2^2))")}, pts);
  CHECK(rh.rank == 1);
  const IndependenceResult rs = independence_rank(
      k, {k.parse("1000*(q1*p2-q2*p1)"), k.parse("0.001*((p1^2+p2^2)/2 - mu/sqrt(q1^2+q2^2))")}, pts);
  CHECK(rs.rank == 2);
  REQUIRE(r4.singular_values.size() == pts.size());
  for (const auto& sv : r4.singular_values) {
    CHECK(sv.size() == 4);
    for (std::size_t i = 1; i < sv.size(); ++i) CHECK(sv[i] <= sv[i - 1]);
  }
  const IndependenceResult fr = field_rank(k, derived(k, {"H", "L"}), pts);
  CHECK(fr.rank == 3);
}

TEST_CASE("invariance matrix, strong") {
  const SystemSpec k = builtin("kepler").spec;
  const auto pts = kepler_points(20, 6);
  const std::vector<std::string> names = {"H", "L", "A1"};
  const InvarianceReport rep = invariance_matrix(k, derived(k, names), exprs(k, names), pts);
  CHECK(rep.per_point.size() == 20);
  // zeta_i(J_j) is the Poisson bracket {J_j, J_i}: H commutes with everything,
  // the rotation generator L turns A1 into -A2.
  const Expression a2 = k.integrals.at("A2");
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const Matrix& m = rep.per_point[p];
    const double a2v = a2.value(pts[p], k.params);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(m(0, j)) <= 1e-8);
      CHECK(std::abs(m(j, 0)) <= 1e-8);
      CHECK(std::abs(m(j, j)) <= 1e-8 * (1 + std::abs(a2v)));
    }
    CHECK(std::abs(m(1, 2) + a2v) <= 1e-8 * (1 + std::abs(a2v)));
    CHECK(std::abs(m(2, 1) - a2v) <= 1e-8 * (1 + std::abs(a2v)));
  }
  // The commuting subsets {H, L} and {H, A1} are invariant in the strong sense.
  for (const auto& pair : {std::vector<std::string>{"H", "L"}, std::vector<std::string>{"H", "A1"}}) {
    const InvarianceReport r = invariance_matrix(k, derived(k, pair), exprs(k, pair), pts);
    CHECK(r.max_abs.max_abs() <= 1e-8);
    CHECK(r.strong_ok(1e-8));
  }
  // Row of H (r = 1) against all three integrals.
  const InvarianceReport rh = invariance_matrix(k, derived(k, {"H"}), exprs(k, names), pts);
  CHECK(rh.strong_ok(1e-8));

  const SymmetryCandidate dt = field(k, "1", {"0", "0"}, {"0", "0"});
  const InvarianceReport r0 = invariance_matrix(k, {dt}, {k.parse("-((p1^2+p2^2)/2 - mu/sqrt(q1^2+q2^2))")}, pts);
  CHECK(r0.max_abs(0, 0) == 0.0);
}

TEST_CASE("invariance matrix, weak constancy") {
  const CatalogEntry fr = builtin("free2d");
  const SystemSpec& s = fr.spec;
  const auto pts = testing_support::domain_points(fr, 20, 13, 0.1);
  const std::vector<SymmetryCandidate> syms = {field(s, "0", {"1", "0"}, {"0", "0"}),
                                               field(s, "0", {"t", "0"}, {"1", "0"})};
  const std::vector<Expression> js = {s.parse("p1"), s.parse("t*p1 - q1")};
  const InvarianceReport rep =
      invariance_matrix(s, syms, js, pts, {Expression::constant(0.0, 2), s.parse("q1")});
  CHECK(rep.weak_ok(1e-9));
  CHECK_FALSE(rep.strong_ok(1e-8));
  CHECK(rep.mean(0, 1) == doctest::Approx(-1.0));
  CHECK(rep.mean(1, 0) == doctest::Approx(1.0));
  CHECK(rep.stddev.max_abs() <= 1e-9);
  REQUIRE(rep.gauge_asymmetry.has_value());
  CHECK((*rep.gauge_asymmetry)(0, 1) == doctest::Approx(1.0));
  CHECK((*rep.gauge_asymmetry)(1, 0) == doctest::Approx(-1.0));

  const CatalogEntry osc = builtin("harmonic");
  const auto opts = testing_support::domain_points(osc, 20, 13, 0.1);
  const InvarianceReport rd = invariance_matrix(osc.spec, {field(osc.spec, "1", {"0"}, {"0"})},
                                                {osc.spec.parse("-(p1^2+q1^2)/2 + 0.5")}, opts);
  CHECK(rd.stddev(0, 0) <= 1e-9);
  CHECK_THROWS_AS(invariance_matrix(s, syms, js, pts, {s.parse("q1")}), Error);
}

TEST_CASE("integrability report for kepler with H and L") {
  const SystemSpec k = builtin("kepler").spec;
  const auto pts = kepler_points(20, 2026);
  const IntegrabilityReport rep =
      integrability_report(k, derived(k, {"H", "L"}), exprs(k, {"H", "L"}), 2, pts);
  CHECK(rep.dimension_condition);
  CHECK(rep.commutation.max_residual <= 1e-6);
  CHECK(rep.independence.rank == 2);
  CHECK(rep.invariance.max_abs.max_abs() <= 1e-8);
  CHECK(rep.hypotheses_hold());

  const IntegrabilityReport over = integrability_report(
      k, derived(k, {"H", "L", "A1"}), exprs(k, {"H", "L", "A1"}), 2, pts);
  CHECK_FALSE(over.dimension_condition);
  // A1 does not commute with L.
  CHECK(over.commutation.max_residual > 1e-3);
}

TEST_CASE("level set sampling") {
  const SystemSpec k = builtin("kepler").spec;
  const LevelSetSample ls = sample_level_set(k, exprs(k, {"H", "L"}), kepler_star(), 20, 0.05, 3);
  CHECK(ls.points.size() + ls.failures == 20);
  CHECK(ls.points.size() >= 15);
  for (const PhasePoint& p : ls.points) {
    CHECK(std::abs(k.integrals.at("H").value(p, k.params) - ls.levels[0]) <= 1e-9);
    CHECK(std::abs(k.integrals.at("L").value(p, k.params) - ls.levels[1]) <= 1e-9);
  }
}
