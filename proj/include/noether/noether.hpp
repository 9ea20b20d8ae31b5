#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "noether/expr.hpp"
#include "noether/geometry.hpp"
#include "noether/phase_space.hpp"

namespace noether {

inline constexpr double default_h_bracket = 1e-5;

/// Field value with its coordinate Jacobian: jac[i * dim + k] = d(component i)/d(x_k).
struct FieldJet {
  FieldValue value;
  std::size_t dim = 0;
  std::vector<double> jac;

  double d(std::size_t component, std::size_t coordinate) const {
    return jac[component * dim + coordinate];
  }
};

/// Data of a weak symmetry: L_zeta(p dq - H dt + beta) = df.
struct WeakData {
  Perturbation beta;
  std::optional<Expression> gauge;  // f; absent means f = 0

  double gauge_value(const PhasePoint& x, const Params& params) const;
};

/// A vector field on the extended phase space proposed as a symmetry.
/// Immutable; cheap to copy.
class SymmetryCandidate {
 public:
  enum class Provenance { explicit_field, derived_from_integral, characteristic, adjusted,
                          converted, closure };

  using Evaluator = std::function<FieldValue(const PhasePoint&)>;
  using JetEvaluator = std::function<FieldJet(const PhasePoint&)>;

  /// Components given as expressions; Jacobians by AD.
  static SymmetryCandidate explicit_field(std::string label, Expression tau,
                                          std::vector<Expression> xi, std::vector<Expression> eta,
                                          Params params = {});
  static SymmetryCandidate explicit_field(const SystemSpec& sys, std::string label,
                                          const std::string& tau,
                                          const std::vector<std::string>& xi,
                                          const std::vector<std::string>& eta);

  /// The inverse-Noether field of F; Jacobian by chain rule through the
  /// second derivatives of H and F.
  static SymmetryCandidate from_integral(const SystemSpec& sys, std::string name, Expression F,
                                         double eps_rho = default_eps_rho);

  /// The characteristic field Z.
  static SymmetryCandidate characteristic(const SystemSpec& sys);

  /// Arbitrary evaluator; without `jet` the Jacobian is taken by central differences.
  static SymmetryCandidate closure(std::string label, std::size_t n, Evaluator eval,
                                   JetEvaluator jet = {});

  FieldValue operator()(const PhasePoint& x) const { return eval_(x); }

  /// Exact Jacobian when available, otherwise central differences with step h.
  FieldJet jet(const PhasePoint& x, double h = default_h_bracket) const;
  bool has_exact_jacobian() const { return static_cast<bool>(jet_); }

  Provenance provenance() const { return provenance_; }
  const std::string& label() const { return label_; }
  std::size_t dim() const { return n_; }
  /// Defining integral for derived candidates.
  const std::optional<Expression>& integral() const { return integral_; }

 private:
  friend SymmetryCandidate adjusted_candidate(const SystemSpec&, const SymmetryCandidate&);
  friend SymmetryCandidate weak_to_strong_candidate(const SystemSpec&, const SymmetryCandidate&,
                                                    const WeakData&, double);

  SymmetryCandidate(Provenance provenance, std::string label, std::size_t n, Evaluator eval,
                    JetEvaluator jet)
      : provenance_(provenance), label_(std::move(label)), n_(n), eval_(std::move(eval)),
        jet_(std::move(jet)) {}

  Provenance provenance_;
  std::string label_;
  std::size_t n_;
  Evaluator eval_;
  JetEvaluator jet_;
  std::optional<Expression> integral_;
};

/// Closed-form symmetry associated with the integral F (plain Poincare-Cartan
/// form). Does not verify that F is an integral.
FieldValue inverse_noether(const SystemSpec& sys, const Expression& F, const PhasePoint& x,
                           double eps_rho = default_eps_rho);
FieldJet inverse_noether_jet(const SystemSpec& sys, const Expression& F, const PhasePoint& x,
                             double eps_rho = default_eps_rho);

/// Residuals of the three Noether-symmetry conditions (dp, dq and dt slots of
/// L_zeta(p dq - H dt)).
struct ResidualReport {
  std::vector<double> r1;
  std::vector<double> r2;
  double r3 = 0.0;
  double max_rel = 0.0;
};

ResidualReport symmetry_residuals(const SystemSpec& sys, const SymmetryCandidate& zeta,
                                  const PhasePoint& x);

/// J = sum p xi - H tau + beta(zeta) - f.
double noether_integral(const SystemSpec& sys, const SymmetryCandidate& zeta,
                        const std::optional<WeakData>& weak, const PhasePoint& x);

/// J with its gradient, assembled from zeta's Jacobian.
Jet2 noether_integral_jet(const SystemSpec& sys, const SymmetryCandidate& zeta,
                          const std::optional<WeakData>& weak, const PhasePoint& x);

/// dF(v) by AD.
double directional_derivative(const SystemSpec& sys, const Expression& F, const FieldValue& v,
                              const PhasePoint& x);

/// Y_f = f R + Y_hat with R the Reeb field of p dq - H dt + beta and Y_hat the
/// horizontal solution of i_Y_hat d alpha = -(df - R(f) alpha), solved as a
/// linear system.
FieldValue contact_hamiltonian_field(const SystemSpec& sys, const Expression& f,
                                     const PhasePoint& x, double eps_rho = default_eps_rho);

/// zeta + rho^-1 (beta(zeta) - f) Z: a strong symmetry with the same integral.
FieldValue weak_to_strong(const SystemSpec& sys, const SymmetryCandidate& zeta,
                          const WeakData& weak, const PhasePoint& x,
                          double eps_rho = default_eps_rho);
SymmetryCandidate weak_to_strong_candidate(const SystemSpec& sys, const SymmetryCandidate& zeta,
                                           const WeakData& weak,
                                           double eps_rho = default_eps_rho);

/// zeta - dt(zeta) Z, with dt-component exactly 0.
SymmetryCandidate adjusted_candidate(const SystemSpec& sys, const SymmetryCandidate& zeta);

/// [V, W] = J_W V - J_V W.
FieldValue lie_bracket(const SystemSpec& sys, const SymmetryCandidate& v,
                       const SymmetryCandidate& w, const PhasePoint& x,
                       double h_bracket = default_h_bracket);

/// Max-norm of i_v d(p dq - H dt); zero iff v is proportional to Z.
double kernel_membership(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x);

}  // namespace noether
