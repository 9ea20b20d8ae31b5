#include "noether/integrability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "noether/errors.hpp"

namespace noether {

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

FieldValue commuting_adjust(const SystemSpec& sys, const SymmetryCandidate& zeta,
                            const PhasePoint& x) {
  FieldValue v = zeta(x);
  FieldValue z = characteristic_field(sys, x);
  z *= v.tau;
  v -= z;
  v.tau = 0.0;
  return v;
}

CommutationReport commutation_report(const SystemSpec& sys,
                                     const std::vector<SymmetryCandidate>& symmetries,
                                     std::size_t r, const std::vector<PhasePoint>& points,
                                     double h_bracket) {
  const std::size_t m = symmetries.size();
  if (r > m) throw Error("commuting subset size r exceeds the number of symmetries");
  std::vector<SymmetryCandidate> adjusted;
  adjusted.reserve(m);
  for (const auto& s : symmetries) adjusted.push_back(adjusted_candidate(sys, s));
  const SymmetryCandidate z = SymmetryCandidate::characteristic(sys);

  CommutationReport rep;
  rep.r = r;
  rep.m = m;
  rep.brackets = Matrix(r, m);
  rep.kernel_defects = Matrix(r, m);
  rep.z_brackets.assign(m, 0.0);
  for (const PhasePoint& x : points) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const FieldValue b = lie_bracket(sys, adjusted[i], adjusted[j], x, h_bracket);
        rep.brackets(i, j) = std::max(rep.brackets(i, j), b.max_norm());
        rep.kernel_defects(i, j) =
            std::max(rep.kernel_defects(i, j), kernel_membership(sys, b, x));
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      rep.z_brackets[j] =
          std::max(rep.z_brackets[j], lie_bracket(sys, z, adjusted[j], x, h_bracket).max_norm());
    }
  }
  rep.max_residual = rep.brackets.max_abs();
  for (double v : rep.z_brackets) rep.max_residual = std::max(rep.max_residual, v);
  return rep;
}

namespace {

void rank_of(const Eigen::MatrixXd& m, double sv_tol, IndependenceResult& out) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<double> values(sv.data(), sv.data() + sv.size());
  std::size_t rank = 0;
  const double largest = values.empty() ? 0.0 : values.front();
  for (double v : values) {
    if (largest > 0.0 && v > sv_tol * largest) ++rank;
  }
  out.ranks.push_back(rank);
  out.singular_values.push_back(std::move(values));
}

void finish_rank(IndependenceResult& out) {
  out.rank = out.ranks.empty() ? 0 : *std::min_element(out.ranks.begin(), out.ranks.end());
}

}  // namespace

IndependenceResult independence_rank(const SystemSpec& sys, const std::vector<Expression>& integrals,
                                     const std::vector<PhasePoint>& points, double sv_tol) {
  const std::size_t dim = extended_dim(sys.n);
  IndependenceResult out;
  for (const PhasePoint& x : points) {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(integrals.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < integrals.size(); ++i) {
      const Jet2 j = integrals[i].jet(x, sys.params, 1);
      for (std::size_t k = 0; k < dim; ++k) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j.d(k);
      }
    }
    rank_of(g, sv_tol, out);
  }
  finish_rank(out);
  return out;
}

IndependenceResult field_rank(const SystemSpec& sys,
                              const std::vector<SymmetryCandidate>& symmetries,
                              const std::vector<PhasePoint>& points, double sv_tol) {
  const std::size_t dim = extended_dim(sys.n);
  IndependenceResult out;
  for (const PhasePoint& x : points) {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(symmetries.size() + 1),
                      static_cast<Eigen::Index>(dim));
    const std::vector<double> z = characteristic_field(sys, x).flat();
    for (std::size_t k = 0; k < dim; ++k) g(0, static_cast<Eigen::Index>(k)) = z[k];
    for (std::size_t i = 0; i < symmetries.size(); ++i) {
      const std::vector<double> v = symmetries[i](x).flat();
      for (std::size_t k = 0; k < dim; ++k) {
        g(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(k)) = v[k];
      }
    }
    rank_of(g, sv_tol, out);
  }
  finish_rank(out);
  return out;
}

InvarianceReport invariance_matrix(const SystemSpec& sys,
                                   const std::vector<SymmetryCandidate>& symmetries,
                                   const std::vector<Expression>& integrals,
                                   const std::vector<PhasePoint>& points,
                                   const std::vector<Expression>& gauges) {
  const std::size_t rows = symmetries.size();
  const std::size_t cols = integrals.size();
  if (!gauges.empty() && gauges.size() != rows) {
    throw Error("gauge list must have one entry per symmetry");
  }
  InvarianceReport rep;
  rep.mean = Matrix(rows, cols);
  rep.stddev = Matrix(rows, cols);
  rep.max_abs = Matrix(rows, cols);
  Matrix asym(rows, rows);
  for (const PhasePoint& x : points) {
    std::vector<FieldValue> values;
    values.reserve(rows);
    for (const auto& s : symmetries) values.push_back(s(x));
    Matrix entry(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        entry(i, j) = directional_derivative(sys, integrals[j], values[i], x);
      }
    }
    if (!gauges.empty()) {
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
          asym(i, j) += directional_derivative(sys, gauges[j], values[i], x) -
                        directional_derivative(sys, gauges[i], values[j], x);
        }
      }
    }
    rep.per_point.push_back(std::move(entry));
  }
  const double count = static_cast<double>(points.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double sum = 0.0, worst = 0.0;
      for (const Matrix& e : rep.per_point) {
        sum += e(i, j);
        worst = std::max(worst, std::abs(e(i, j)));
      }
      const double mean = points.empty() ? 0.0 : sum / count;
      double var = 0.0;
      for (const Matrix& e : rep.per_point) var += (e(i, j) - mean) * (e(i, j) - mean);
      rep.mean(i, j) = mean;
      rep.stddev(i, j) = points.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
      rep.max_abs(i, j) = worst;
    }
  }
  if (!gauges.empty()) {
    for (double& v : asym.data) v = points.empty() ? 0.0 : v / count;
    rep.gauge_asymmetry = std::move(asym);
  }
  return rep;
}

IntegrabilityReport integrability_report(const SystemSpec& sys,
                                         const std::vector<SymmetryCandidate>& symmetries,
                                         const std::vector<Expression>& integrals, std::size_t r,
                                         const std::vector<PhasePoint>& points,
                                         const IntegrabilityOptions& options) {
  IntegrabilityReport rep;
  rep.n = sys.n;
  rep.m = symmetries.size();
  rep.r = r;
  rep.dimension_condition = 2 * sys.n == rep.m + r;
  rep.sample_points = points;
  rep.commutation = commutation_report(sys, symmetries, r, points, options.h_bracket);
  rep.independence = independence_rank(sys, integrals, points, options.sv_tol);
  rep.fields = field_rank(sys, symmetries, points, options.sv_tol);
  const std::vector<SymmetryCandidate> commuting(symmetries.begin(),
                                                 symmetries.begin() + static_cast<long>(r));
  rep.invariance = invariance_matrix(sys, commuting, integrals, points);
  rep.commutation_ok = rep.commutation.max_residual <= options.bracket_tol;
  rep.independence_ok = rep.independence.rank == integrals.size() &&
                        rep.fields.rank == symmetries.size() + 1;
  rep.invariance_ok = options.weak ? rep.invariance.weak_ok(options.invariance_tol)
                                   : rep.invariance.strong_ok(options.invariance_tol);
  return rep;
}

LevelSetSample sample_level_set(const SystemSpec& sys, const std::vector<Expression>& integrals,
                                const PhasePoint& seed, std::size_t count, double radius,
                                std::uint64_t rng_seed, std::size_t max_iterations) {
  const std::size_t dim = extended_dim(sys.n);
  const auto m = static_cast<Eigen::Index>(integrals.size());
  LevelSetSample out;
  for (const Expression& e : integrals) out.levels.push_back(e.value(seed, sys.params));
  Rng rng(rng_seed);
  auto residual = [&](const PhasePoint& x, Eigen::VectorXd& r, Eigen::MatrixXd& g) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const Jet2 j = integrals[static_cast<std::size_t>(i)].jet(x, sys.params, 1);
      r(i) = j.value - out.levels[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < dim; ++k) g(i, static_cast<Eigen::Index>(k)) = j.d(k);
    }
  };
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> coords = seed.flat();
    for (double& v : coords) v += rng.uniform(-radius, radius);
    PhasePoint x = PhasePoint::from_flat(coords);
    bool converged = false;
    try {
      Eigen::VectorXd r(m);
      Eigen::MatrixXd g(m, static_cast<Eigen::Index>(dim));
      for (std::size_t it = 0; it < max_iterations && !converged; ++it) {
        residual(x, r, g);
        double scale = 1.0;
        for (double level : out.levels) scale = std::max(scale, std::abs(level));
        if (r.lpNorm<Eigen::Infinity>() <= 1e-10 * scale) {
          converged = true;
          break;
        }
        const Eigen::VectorXd step = g.completeOrthogonalDecomposition().solve(r);
        // Halve the step until the residual decreases.
        double damping = 1.0;
        const double before = r.norm();
        PhasePoint trial = x;
        for (int halving = 0; halving < 20; ++halving) {
          trial = x;
          for (std::size_t k = 0; k < dim; ++k) {
            trial.coord(k) -= damping * step(static_cast<Eigen::Index>(k));
          }
          Eigen::VectorXd rt(m);
          Eigen::MatrixXd gt(m, static_cast<Eigen::Index>(dim));
          try {
            residual(trial, rt, gt);
            if (rt.norm() < before) break;
          } catch (const DomainError&) {
          }
          damping *= 0.5;
        }
        x = trial;
      }
    } catch (const DomainError&) {
      converged = false;
    }
    if (converged) {
      out.points.push_back(std::move(x));
    } else {
      ++out.failures;
    }
  }
  return out;
}

}  // namespace noether
