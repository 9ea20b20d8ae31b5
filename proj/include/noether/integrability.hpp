#pragma once

#include <optional>
#include <vector>

#include "noether/expr.hpp"
#include "noether/geometry.hpp"
#include "noether/noether.hpp"
#include "noether/sampling.hpp"

namespace noether {

/// zeta - tau Z with tau = dt(zeta); the dt-component of the result is 0.
FieldValue commuting_adjust(const SystemSpec& sys, const SymmetryCandidate& zeta,
                            const PhasePoint& x);

/// Row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double max_abs() const;
};

struct CommutationReport {
  std::size_t r = 0;
  std::size_t m = 0;
  Matrix brackets;        // r x m: max over points of |[adj_i, adj_j]|_max
  Matrix kernel_defects;  // r x m: max over points of kernel_membership([adj_i, adj_j])
  std::vector<double> z_brackets;  // m: max over points of |[Z, adj_j]|_max
  double max_residual = 0.0;
};

/// Brackets of the adjusted fields among the first r and all m, plus [Z, .].
CommutationReport commutation_report(const SystemSpec& sys,
                                     const std::vector<SymmetryCandidate>& symmetries,
                                     std::size_t r, const std::vector<PhasePoint>& points,
                                     double h_bracket = default_h_bracket);

struct IndependenceResult {
  std::size_t rank = 0;  // minimum over points
  std::vector<std::size_t> ranks;
  std::vector<std::vector<double>> singular_values;  // per point, nonincreasing
};

/// Rank of the gradient matrix of the integrals: singular values above
/// sv_tol times the largest count.
IndependenceResult independence_rank(const SystemSpec& sys, const std::vector<Expression>& integrals,
                                     const std::vector<PhasePoint>& points, double sv_tol = 1e-8);

/// Same test applied to the fields Z, zeta_1..zeta_m as vectors.
IndependenceResult field_rank(const SystemSpec& sys,
                              const std::vector<SymmetryCandidate>& symmetries,
                              const std::vector<PhasePoint>& points, double sv_tol = 1e-8);

struct InvarianceReport {
  Matrix mean;    // symmetries x integrals: mean over points of zeta_i(J_j)
  Matrix stddev;  // sample standard deviation across points
  Matrix max_abs;
  std::vector<Matrix> per_point;
  std::optional<Matrix> gauge_asymmetry;  // mean of zeta_i(f_j) - zeta_j(f_i)

  /// Strong: every entry vanishes. Weak: every entry constant across points.
  bool strong_ok(double tol) const { return max_abs.max_abs() <= tol; }
  bool weak_ok(double tol) const { return stddev.max_abs() <= tol; }
};

/// Directional derivatives zeta_i(J_j) at every point. `gauges`, when given,
/// must hold one gauge function f_i per symmetry.
InvarianceReport invariance_matrix(const SystemSpec& sys,
                                   const std::vector<SymmetryCandidate>& symmetries,
                                   const std::vector<Expression>& integrals,
                                   const std::vector<PhasePoint>& points,
                                   const std::vector<Expression>& gauges = {});

struct IntegrabilityOptions {
  double bracket_tol = 1e-6;
  double sv_tol = 1e-8;
  double invariance_tol = 1e-8;
  bool weak = false;
  double h_bracket = default_h_bracket;
};

struct IntegrabilityReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  bool dimension_condition = false;  // 2n = m + r
  CommutationReport commutation;
  IndependenceResult independence;
  IndependenceResult fields;
  InvarianceReport invariance;  // rows: first r symmetries
  std::vector<PhasePoint> sample_points;
  bool commutation_ok = false;
  bool independence_ok = false;
  bool invariance_ok = false;
  bool hypotheses_hold() const {
    return dimension_condition && commutation_ok && independence_ok && invariance_ok;
  }
};

/// Pointwise check of the hypotheses of the integrability theorem.
IntegrabilityReport integrability_report(const SystemSpec& sys,
                                         const std::vector<SymmetryCandidate>& symmetries,
                                         const std::vector<Expression>& integrals, std::size_t r,
                                         const std::vector<PhasePoint>& points,
                                         const IntegrabilityOptions& options = {});

struct LevelSetSample {
  std::vector<PhasePoint> points;
  std::vector<double> levels;
  std::size_t failures = 0;
};

/// Points near `seed` projected onto {J_i = J_i(seed)} by damped minimum-norm
/// Newton corrections. Points that do not converge are counted, not returned.
LevelSetSample sample_level_set(const SystemSpec& sys, const std::vector<Expression>& integrals,
                                const PhasePoint& seed, std::size_t count, double radius,
                                std::uint64_t rng_seed, std::size_t max_iterations = 30);

}  // namespace noether
