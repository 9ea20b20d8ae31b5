#include "noether/geometry.hpp"

#include <cmath>

#include "noether/errors.hpp"

namespace noether {

Perturbation Perturbation::dt(std::size_t n, double a) {
  Perturbation b = none(n);
  b.constant.a = a;
  return b;
}

Perturbation Perturbation::exact(Expression g) {
  Perturbation b = none(g.dim());
  b.potential = std::move(g);
  return b;
}

OneFormValue Perturbation::at(const PhasePoint& x, const Params& params) const {
  OneFormValue out = constant;
  if (potential) {
    const Jet2 g = potential->jet(x, params, 1);
    const std::size_t n = x.dim();
    out.a += g.d(t_index());
    for (std::size_t i = 0; i < n; ++i) {
      out.b[i] += g.d(q_index(n, i));
      out.c[i] += g.d(p_index(n, i));
    }
  }
  return out;
}

void NamedExpressions::add(std::string name, Expression expr) {
  for (auto& item : items_) {
    if (item.first == name) {
      item.second = std::move(expr);
      return;
    }
  }
  items_.emplace_back(std::move(name), std::move(expr));
}

const Expression* NamedExpressions::find(std::string_view name) const {
  for (const auto& item : items_) {
    if (item.first == name) return &item.second;
  }
  return nullptr;
}

const Expression& NamedExpressions::at(std::string_view name) const {
  if (const Expression* e = find(name)) return *e;
  throw UnknownIdentifier(std::string(name));
}

std::vector<std::string> NamedExpressions::names() const {
  std::vector<std::string> out;
  for (const auto& item : items_) out.push_back(item.first);
  return out;
}

SystemSpec SystemSpec::from_text(std::size_t n, const std::string& hamiltonian,
                                 const std::vector<std::pair<std::string, std::string>>& integrals,
                                 Params params) {
  SystemSpec sys;
  sys.n = n;
  sys.params = std::move(params);
  sys.hamiltonian = sys.parse(hamiltonian);
  for (const auto& [name, text] : integrals) sys.integrals.add(name, sys.parse(text));
  return sys;
}

std::set<std::string, std::less<>> SystemSpec::param_names() const {
  std::set<std::string, std::less<>> names;
  for (const auto& [name, value] : params) names.insert(name);
  return names;
}

Expression SystemSpec::parse(std::string_view text) const {
  return Expression::parse(text, n, param_names());
}

namespace {

FieldValue characteristic_from(const Jet2& h, std::size_t n) {
  FieldValue z = FieldValue::zero(n);
  z.tau = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    z.xi[i] = h.d(p_index(n, i));
    z.eta[i] = -h.d(q_index(n, i));
  }
  return z;
}

double rho_from(const Jet2& h, const PhasePoint& x) {
  const std::size_t n = x.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x.p[i] * h.d(p_index(n, i));
  return s - h.value;
}

}  // namespace

FieldValue characteristic_field(const SystemSpec& sys, const PhasePoint& x) {
  return characteristic_from(sys.h_jet(x, 1), sys.n);
}

double elementary_action(const SystemSpec& sys, const PhasePoint& x) {
  return rho_from(sys.h_jet(x, 1), x);
}

double beta_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x) {
  if (!sys.beta) return 0.0;
  return sys.beta->at(x, sys.params)(v);
}

double perturbed_elementary_action(const SystemSpec& sys, const PhasePoint& x) {
  const Jet2 h = sys.h_jet(x, 1);
  const double rho = rho_from(h, x);
  if (!sys.beta) return rho;
  return rho + sys.beta->at(x, sys.params)(characteristic_from(h, sys.n));
}

FieldValue reeb_field(const SystemSpec& sys, const PhasePoint& x, double eps_rho) {
  const double rho = perturbed_elementary_action(sys, x);
  if (!(std::abs(rho) > eps_rho)) throw ContactDegenerate(rho);
  FieldValue z = characteristic_field(sys, x);
  z *= 1.0 / rho;
  return z;
}

double pc_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x) {
  const double h = sys.hamiltonian.value(x, sys.params);
  double s = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) s += x.p[i] * v.xi[i];
  return s - h * v.tau + beta_contract(sys, v, x);
}

OneFormValue dpc_contract(const Jet2& h, const FieldValue& v) {
  const std::size_t n = v.dim();
  OneFormValue out = OneFormValue::zero(n);
  // The tau*H_t terms of tau dH and -dH(v) dt cancel in the dt slot.
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hq = h.d(q_index(n, i));
    const double hp = h.d(p_index(n, i));
    a -= v.xi[i] * hq + v.eta[i] * hp;
    out.b[i] = v.eta[i] + v.tau * hq;
    out.c[i] = -v.xi[i] + v.tau * hp;
  }
  out.a = a;
  return out;
}

OneFormValue dpc_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x) {
  if (v.dim() != sys.n) throw DimensionMismatch("field dimension does not match system");
  return dpc_contract(sys.h_jet(x, 1), v);
}

OneFormValue pc_form(const SystemSpec& sys, const PhasePoint& x) {
  OneFormValue out = OneFormValue::zero(sys.n);
  out.a = -sys.hamiltonian.value(x, sys.params);
  for (std::size_t i = 0; i < sys.n; ++i) out.b[i] = x.p[i];
  if (sys.beta) {
    const OneFormValue beta = sys.beta->at(x, sys.params);
    out.a += beta.a;
    for (std::size_t i = 0; i < sys.n; ++i) {
      out.b[i] += beta.b[i];
      out.c[i] += beta.c[i];
    }
  }
  return out;
}

HorizontalTest is_horizontal(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x,
                             double tol) {
  const double h = sys.hamiltonian.value(x, sys.params);
  double pxi = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) pxi += x.p[i] * v.xi[i];
  const double residual = std::abs(pxi - v.tau * h + beta_contract(sys, v, x));
  const double scale = std::abs(pxi) + std::abs(h * v.tau);
  return {residual <= tol * (1.0 + scale), residual};
}

}  // namespace noether
