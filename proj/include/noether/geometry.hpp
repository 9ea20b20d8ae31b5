#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noether/expr.hpp"
#include "noether/phase_space.hpp"

namespace noether {

inline constexpr double default_eps_rho = 1e-9;
inline constexpr double default_tol = 1e-9;

/// Closed perturbation of the Poincare-Cartan form: constant coefficients
/// plus an optional exact part dg. Closed by construction.
struct Perturbation {
  OneFormValue constant;
  std::optional<Expression> potential;  // g, contributing dg

  static Perturbation none(std::size_t n) { return {OneFormValue::zero(n), std::nullopt}; }
  static Perturbation dt(std::size_t n, double a);
  static Perturbation exact(Expression g);

  /// Total coefficients (constant + dg) at x.
  OneFormValue at(const PhasePoint& x, const Params& params) const;
};

/// Named scalar fields, kept in declaration order.
class NamedExpressions {
 public:
  void add(std::string name, Expression expr);
  const Expression& at(std::string_view name) const;
  const Expression* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, Expression>> items_;
};

struct SystemSpec {
  std::size_t n = 0;
  Expression hamiltonian;
  NamedExpressions integrals;
  std::optional<Perturbation> beta;
  Params params;

  /// Parses every expression against n and the names in `params`.
  static SystemSpec from_text(std::size_t n, const std::string& hamiltonian,
                              const std::vector<std::pair<std::string, std::string>>& integrals,
                              Params params);

  std::set<std::string, std::less<>> param_names() const;
  Expression parse(std::string_view text) const;
  Jet2 h_jet(const PhasePoint& x, int order) const { return hamiltonian.jet(x, params, order); }
};

/// Z = d/dt + H_p d/dq - H_q d/dp, the kernel of d(p dq - H dt) with dt(Z) = 1.
FieldValue characteristic_field(const SystemSpec& sys, const PhasePoint& x);

/// rho = i_Z(p dq - H dt) = p . H_p - H.
double elementary_action(const SystemSpec& sys, const PhasePoint& x);

/// rho + beta(Z); equals elementary_action when sys has no perturbation.
double perturbed_elementary_action(const SystemSpec& sys, const PhasePoint& x);

/// Z / rho (rho perturbed by beta when present). Throws ContactDegenerate.
FieldValue reeb_field(const SystemSpec& sys, const PhasePoint& x,
                      double eps_rho = default_eps_rho);

/// beta(v) for the system's perturbation (0 without one).
double beta_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x);

/// i_v(p dq - H dt + beta).
double pc_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x);

/// i_v d(p dq - H dt) = eta dq - xi dp + tau dH - dH(v) dt.
OneFormValue dpc_contract(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x);

/// Same contraction with H's gradient supplied by the caller.
OneFormValue dpc_contract(const Jet2& h, const FieldValue& v);

/// The form p dq - H dt + beta itself at x.
OneFormValue pc_form(const SystemSpec& sys, const PhasePoint& x);

struct HorizontalTest {
  bool horizontal = false;
  double residual = 0.0;
};

/// Tests sum p xi = tau H (plus beta(v)), relative to |p.xi| + |H tau|.
HorizontalTest is_horizontal(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x,
                             double tol = default_tol);

}  // namespace noether
