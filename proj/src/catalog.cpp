#include "noether/catalog.hpp"

#include <cmath>

namespace noether {

namespace {

using Integrals = std::vector<std::pair<std::string, std::string>>;

CatalogEntry make(std::string name, std::size_t n, const std::string& h, const Integrals& ints,
                  Params params, std::vector<std::string> notes) {
  CatalogEntry e;
  e.name = std::move(name);
  e.spec = SystemSpec::from_text(n, h, ints, std::move(params));
  e.notes = std::move(notes);
  return e;
}

CatalogEntry free1d() {
  return make("free1d", 1, "p1^2/2", {{"H", "p1^2/2"}, {"P1", "p1"}, {"G1", "t*p1 - q1"}}, {},
              {"free particle on a line", "G1 is the Galilean boost integral"});
}

CatalogEntry free2d() {
  return make("free2d", 2, "(p1^2+p2^2)/2",
              {{"H", "(p1^2+p2^2)/2"}, {"P1", "p1"}, {"P2", "p2"}, {"L", "q1*p2-q2*p1"}}, {},
              {"free particle in the plane", "linear integrals give point symmetries"});
}

CatalogEntry harmonic() {
  return make("harmonic", 1, "(p1^2+q1^2)/2",
              {{"H", "(p1^2+q1^2)/2"},
               {"C", "q1*cos(t) - p1*sin(t)"},
               {"S", "q1*sin(t) + p1*cos(t)"}},
              {}, {"unit-frequency oscillator", "C and S are explicitly time-dependent integrals",
                   "rho = (p1^2 - q1^2)/2 vanishes on |p1| = |q1|"});
}

CatalogEntry kepler() {
  CatalogEntry e = make(
      "kepler", 2, "(p1^2+p2^2)/2 - mu/sqrt(q1^2+q2^2)",
      {{"H", "(p1^2+p2^2)/2 - mu/sqrt(q1^2+q2^2)"},
       {"L", "q1*p2-q2*p1"},
       {"A1", "q1*p2^2-q2*p1*p2-mu*q1/sqrt(q1^2+q2^2)"},
       {"A2", "q2*p1^2-q1*p1*p2-mu*q2/sqrt(q1^2+q2^2)"}},
      {{"mu", 1.0}},
      {"planar Kepler problem, rho = T - V > 0", "(A1, A2) is the Runge-Lenz vector",
       "A1^2 + A2^2 = mu^2 + 2 H L^2"});
  e.domain.guard = [](const PhasePoint& x) { return std::hypot(x.q[0], x.q[1]) > 1e-6; };
  const double mu = e.spec.params.at("mu");
  for (int k = 1; k <= 2; ++k) {
    e.reference_symmetries.push_back(
        {"A" + std::to_string(k),
         SymmetryCandidate::closure("kepler_A" + std::to_string(k), 2,
                                    [k, mu](const PhasePoint& x) {
                                      return kepler_reference_symmetry(k, x, mu);
                                    })});
  }
  return e;
}

CatalogEntry geodesic_flat_quadratic() {
  return make("geodesic_flat_quadratic", 2, "(p1^2+p2^2)/2",
              {{"H", "(p1^2+p2^2)/2"}, {"F", "p1^2/2"}}, {},
              {"geodesic flow of the flat metric", "F is a quadratic integral, rho = H"});
}

CatalogEntry natural_shifted() {
  CatalogEntry e = make("natural_shifted", 1, "(p1^2+q1^2)/2 - c",
                        {{"H", "(p1^2+q1^2)/2 - c"},
                         {"C", "q1*cos(t) - p1*sin(t)"},
                         {"S", "q1*sin(t) + p1*cos(t)"}},
                        {{"c", 2.0}},
                        {"oscillator with potential V - c", "rho = T - V + c > 0 for |q1| < 1, |p1| < 2"});
  e.domain.guard = [](const PhasePoint& x) {
    return std::abs(x.q[0]) < 1.0 && std::abs(x.p[0]) < 2.0;
  };
  return e;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "free1d", "free2d", "harmonic", "kepler", "geodesic_flat_quadratic", "natural_shifted"};
  return names;
}

CatalogEntry builtin(std::string_view name) {
  if (name == "free1d") return free1d();
  if (name == "free2d") return free2d();
  if (name == "harmonic") return harmonic();
  if (name == "kepler") return kepler();
  if (name == "geodesic_flat_quadratic") return geodesic_flat_quadratic();
  if (name == "natural_shifted") return natural_shifted();
  throw UnknownSystem(std::string(name));
}

FieldValue kepler_reference_symmetry(int k, const PhasePoint& x, double mu, double eps_rho) {
  if (k != 1 && k != 2) throw Error("kepler_reference_symmetry: k must be 1 or 2");
  if (x.q.size() != 2 || x.p.size() != 2) throw DimensionMismatch("kepler requires n = 2");
  const double q1 = x.q[0], q2 = x.q[1], p1 = x.p[0], p2 = x.p[1];
  const double r = std::sqrt(q1 * q1 + q2 * q2);
  if (r == 0.0) throw DomainError("division by zero", "mu/sqrt(q1^2+q2^2)");
  const double r3 = r * r * r;
  const double rho = (p1 * p1 + p2 * p2) / 2 + mu / r;
  if (!(std::abs(rho) > eps_rho)) throw ContactDegenerate(rho);

  FieldValue v = FieldValue::zero(2);
  if (k == 1) {
    const double tau = -(q1 * p2 * p2 - q2 * p1 * p2 + mu * q1 / r) / rho;
    v.tau = tau;
    v.xi[0] = tau * p1 - q2 * p2;
    v.xi[1] = tau * p2 + 2 * q1 * p2 - q2 * p1;
    v.eta[0] = -tau * mu * q1 / r3 - p2 * p2 - mu * q1 * q1 / r3 + mu / r;
    v.eta[1] = -tau * mu * q2 / r3 + p1 * p2 - mu * q1 * q2 / r3;
  } else {
    const double tau = -(q2 * p1 * p1 - q1 * p1 * p2 + mu * q2 / r) / rho;
    v.tau = tau;
    v.xi[0] = tau * p1 + 2 * q2 * p1 - q1 * p2;
    v.xi[1] = tau * p2 - q1 * p1;
    v.eta[0] = -tau * mu * q1 / r3 + p1 * p2 - mu * q1 * q2 / r3;
    v.eta[1] = -tau * mu * q2 / r3 - p1 * p1 - mu * q2 * q2 / r3 + mu / r;
  }
  return v;
}

}  // namespace noether
