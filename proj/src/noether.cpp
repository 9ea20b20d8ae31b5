#include "noether/noether.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "noether/errors.hpp"

namespace noether {

namespace {

// Z and its Jacobian, plus rho and grad rho, from a second-order jet of H.
struct CharacteristicJet {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> z;
  std::vector<double> jac;
  double rho = 0.0;
  std::vector<double> grad_rho;
};

CharacteristicJet characteristic_jet(const Jet2& h, const PhasePoint& x) {
  const std::size_t n = x.dim();
  const std::size_t dim = extended_dim(n);
  CharacteristicJet c;
  c.n = n;
  c.dim = dim;
  c.z.assign(dim, 0.0);
  c.jac.assign(dim * dim, 0.0);
  c.grad_rho.assign(dim, 0.0);
  c.z[0] = 1.0;
  double pdh = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t qi = q_index(n, i);
    const std::size_t pi = p_index(n, i);
    c.z[qi] = h.d(pi);
    c.z[pi] = -h.d(qi);
    pdh += x.p[i] * h.d(pi);
    for (std::size_t k = 0; k < dim; ++k) {
      c.jac[qi * dim + k] = h.d2(pi, k);
      c.jac[pi * dim + k] = -h.d2(qi, k);
    }
  }
  c.rho = pdh - h.value;
  for (std::size_t k = 0; k < dim; ++k) {
    double s = -h.d(k);
    for (std::size_t i = 0; i < n; ++i) s += x.p[i] * h.d2(p_index(n, i), k);
    c.grad_rho[k] = s;
  }
  for (std::size_t i = 0; i < n; ++i) c.grad_rho[p_index(n, i)] += h.d(p_index(n, i));
  return c;
}

// Hamiltonian field X_F = F_p d/dq - F_q d/dp and sum p F_p, with derivatives.
struct IntegralJet {
  std::vector<double> x;
  std::vector<double> jac;
  double s = 0.0;
  std::vector<double> grad_s;
};

IntegralJet integral_jet(const Jet2& f, const PhasePoint& pt, bool with_derivatives) {
  const std::size_t n = pt.dim();
  const std::size_t dim = extended_dim(n);
  IntegralJet out;
  out.x.assign(dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.x[q_index(n, j)] = f.d(p_index(n, j));
    out.x[p_index(n, j)] = -f.d(q_index(n, j));
    out.s += f.d(p_index(n, j)) * pt.p[j];
  }
  if (!with_derivatives) return out;
  out.jac.assign(dim * dim, 0.0);
  out.grad_s.assign(dim, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t qj = q_index(n, j);
    const std::size_t pj = p_index(n, j);
    for (std::size_t k = 0; k < dim; ++k) {
      out.jac[qj * dim + k] = f.d2(pj, k);
      out.jac[pj * dim + k] = -f.d2(qj, k);
      out.grad_s[k] += f.d2(pj, k) * pt.p[j];
    }
    out.grad_s[pj] += f.d(pj);
  }
  return out;
}

void check_rho(double rho, double eps_rho) {
  if (!(std::abs(rho) > eps_rho)) throw ContactDegenerate(rho);
}

FieldJet fd_field_jet(const SymmetryCandidate::Evaluator& eval, const PhasePoint& x, double h) {
  FieldJet out;
  out.value = eval(x);
  out.dim = extended_dim(x.dim());
  out.jac.assign(out.dim * out.dim, 0.0);
  for (std::size_t k = 0; k < out.dim; ++k) {
    PhasePoint plus = x;
    PhasePoint minus = x;
    plus.coord(k) += h;
    minus.coord(k) -= h;
    const FieldValue vp = eval(plus);
    const FieldValue vm = eval(minus);
    for (std::size_t i = 0; i < out.dim; ++i) {
      out.jac[i * out.dim + k] = (vp.comp(i) - vm.comp(i)) / (2.0 * h);
    }
  }
  return out;
}

// Gradient of beta(v) along a field with Jacobian jv: Hess(g) v + jv^T B.
std::vector<double> beta_pairing_gradient(const WeakData& weak, const Params& params,
                                          const PhasePoint& x, const std::vector<double>& v,
                                          const std::vector<double>& jv,
                                          const std::vector<double>& b) {
  const std::size_t dim = v.size();
  std::vector<double> grad(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t m = 0; m < dim; ++m) grad[k] += b[m] * jv[m * dim + k];
  }
  if (weak.beta.potential) {
    const Jet2 g = weak.beta.potential->jet(x, params, 2);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t m = 0; m < dim; ++m) grad[k] += g.d2(m, k) * v[m];
    }
  }
  return grad;
}

}  // namespace

double WeakData::gauge_value(const PhasePoint& x, const Params& params) const {
  return gauge ? gauge->value(x, params) : 0.0;
}

SymmetryCandidate SymmetryCandidate::explicit_field(std::string label, Expression tau,
                                                    std::vector<Expression> xi,
                                                    std::vector<Expression> eta, Params params) {
  const std::size_t n = tau.dim();
  if (xi.size() != n || eta.size() != n) {
    throw DimensionMismatch("explicit field needs n xi and n eta components");
  }
  std::vector<Expression> comps;
  comps.push_back(std::move(tau));
  for (auto& e : xi) comps.push_back(std::move(e));
  for (auto& e : eta) comps.push_back(std::move(e));
  auto shared = std::make_shared<const std::vector<Expression>>(std::move(comps));
  auto shared_params = std::make_shared<const Params>(std::move(params));
  Evaluator eval = [shared, shared_params](const PhasePoint& x) {
    std::vector<double> flat;
    flat.reserve(shared->size());
    for (const auto& c : *shared) flat.push_back(c.value(x, *shared_params));
    return FieldValue::from_flat(flat);
  };
  JetEvaluator jet = [shared, shared_params](const PhasePoint& x) {
    FieldJet out;
    out.dim = shared->size();
    out.jac.assign(out.dim * out.dim, 0.0);
    std::vector<double> flat(out.dim);
    for (std::size_t i = 0; i < out.dim; ++i) {
      const Jet2 j = (*shared)[i].jet(x, *shared_params, 1);
      flat[i] = j.value;
      std::copy(j.gradient.begin(), j.gradient.end(), out.jac.begin() + i * out.dim);
    }
    out.value = FieldValue::from_flat(flat);
    return out;
  };
  return SymmetryCandidate(Provenance::explicit_field, std::move(label), n, std::move(eval),
                           std::move(jet));
}

SymmetryCandidate SymmetryCandidate::explicit_field(const SystemSpec& sys, std::string label,
                                                    const std::string& tau,
                                                    const std::vector<std::string>& xi,
                                                    const std::vector<std::string>& eta) {
  std::vector<Expression> xs;
  std::vector<Expression> es;
  for (const auto& s : xi) xs.push_back(sys.parse(s));
  for (const auto& s : eta) es.push_back(sys.parse(s));
  return explicit_field(std::move(label), sys.parse(tau), std::move(xs), std::move(es),
                        sys.params);
}

SymmetryCandidate SymmetryCandidate::from_integral(const SystemSpec& sys, std::string name,
                                                   Expression F, double eps_rho) {
  Evaluator eval = [sys, F, eps_rho](const PhasePoint& x) {
    return inverse_noether(sys, F, x, eps_rho);
  };
  JetEvaluator jet = [sys, F, eps_rho](const PhasePoint& x) {
    return inverse_noether_jet(sys, F, x, eps_rho);
  };
  SymmetryCandidate c(Provenance::derived_from_integral, std::move(name), sys.n, std::move(eval),
                      std::move(jet));
  c.integral_ = std::move(F);
  return c;
}

SymmetryCandidate SymmetryCandidate::characteristic(const SystemSpec& sys) {
  Evaluator eval = [sys](const PhasePoint& x) { return characteristic_field(sys, x); };
  JetEvaluator jet = [sys](const PhasePoint& x) {
    const CharacteristicJet c = characteristic_jet(sys.h_jet(x, 2), x);
    return FieldJet{FieldValue::from_flat(c.z), c.dim, c.jac};
  };
  return SymmetryCandidate(Provenance::characteristic, "Z", sys.n, std::move(eval),
                           std::move(jet));
}

SymmetryCandidate SymmetryCandidate::closure(std::string label, std::size_t n, Evaluator eval,
                                             JetEvaluator jet) {
  return SymmetryCandidate(Provenance::closure, std::move(label), n, std::move(eval),
                           std::move(jet));
}

FieldJet SymmetryCandidate::jet(const PhasePoint& x, double h) const {
  if (jet_) return jet_(x);
  return fd_field_jet(eval_, x, h);
}

FieldValue inverse_noether(const SystemSpec& sys, const Expression& F, const PhasePoint& x,
                           double eps_rho) {
  const Jet2 h = sys.h_jet(x, 1);
  const Jet2 f = F.jet(x, sys.params, 1);
  const std::size_t n = sys.n;
  double hp_p = 0.0;
  for (std::size_t i = 0; i < n; ++i) hp_p += x.p[i] * h.d(p_index(n, i));
  const double rho = hp_p - h.value;
  check_rho(rho, eps_rho);
  const IntegralJet ij = integral_jet(f, x, false);
  const double u = (f.value - ij.s) / rho;
  FieldValue out = FieldValue::zero(n);
  out.tau = u;
  for (std::size_t i = 0; i < n; ++i) {
    out.xi[i] = u * h.d(p_index(n, i)) + f.d(p_index(n, i));
    out.eta[i] = -u * h.d(q_index(n, i)) - f.d(q_index(n, i));
  }
  return out;
}

FieldJet inverse_noether_jet(const SystemSpec& sys, const Expression& F, const PhasePoint& x,
                             double eps_rho) {
  const Jet2 h = sys.h_jet(x, 2);
  const Jet2 f = F.jet(x, sys.params, 2);
  const CharacteristicJet c = characteristic_jet(h, x);
  check_rho(c.rho, eps_rho);
  const IntegralJet ij = integral_jet(f, x, true);
  const std::size_t dim = c.dim;
  const double u = (f.value - ij.s) / c.rho;
  std::vector<double> grad_u(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    grad_u[k] = (f.d(k) - ij.grad_s[k] - u * c.grad_rho[k]) / c.rho;
  }
  FieldJet out;
  out.dim = dim;
  out.jac.assign(dim * dim, 0.0);
  std::vector<double> flat(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    flat[i] = u * c.z[i] + ij.x[i];
    for (std::size_t k = 0; k < dim; ++k) {
      out.jac[i * dim + k] = c.z[i] * grad_u[k] + u * c.jac[i * dim + k] + ij.jac[i * dim + k];
    }
  }
  // Same arithmetic as inverse_noether for the value.
  out.value = inverse_noether(sys, F, x, eps_rho);
  return out;
}

ResidualReport symmetry_residuals(const SystemSpec& sys, const SymmetryCandidate& zeta,
                                  const PhasePoint& x) {
  const std::size_t n = sys.n;
  const FieldJet zj = zeta.jet(x);
  const Jet2 h = sys.h_jet(x, 1);
  const FieldValue& v = zj.value;
  ResidualReport rep;
  rep.r1.assign(n, 0.0);
  rep.r2.assign(n, 0.0);
  double max_rel = 0.0;
  auto record = [&](double residual, double scale) {
    max_rel = std::max(max_rel, std::abs(residual) / (1.0 + scale));
  };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t pj = p_index(n, j);
    const std::size_t qj = q_index(n, j);
    double s1 = 0.0, sc1 = 0.0, s2 = v.eta[j], sc2 = std::abs(v.eta[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = q_index(n, i);
      s1 += x.p[i] * zj.d(row, pj);
      sc1 += std::abs(x.p[i] * zj.d(row, pj));
      s2 += x.p[i] * zj.d(row, qj);
      sc2 += std::abs(x.p[i] * zj.d(row, qj));
    }
    s1 -= h.value * zj.d(0, pj);
    sc1 += std::abs(h.value * zj.d(0, pj));
    s2 -= h.value * zj.d(0, qj);
    sc2 += std::abs(h.value * zj.d(0, qj));
    rep.r1[j] = s1;
    rep.r2[j] = s2;
    record(s1, sc1);
    record(s2, sc2);
  }
  double s3 = 0.0, sc3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x.p[i] * zj.d(q_index(n, i), t_index());
    const double b = v.eta[i] * h.d(p_index(n, i));
    const double c = v.xi[i] * h.d(q_index(n, i));
    s3 += a - b - c;
    sc3 += std::abs(a) + std::abs(b) + std::abs(c);
  }
  const double d = h.value * zj.d(0, t_index());
  const double e = v.tau * h.d(t_index());
  s3 -= d + e;
  sc3 += std::abs(d) + std::abs(e);
  rep.r3 = s3;
  record(s3, sc3);
  rep.max_rel = max_rel;
  return rep;
}

double noether_integral(const SystemSpec& sys, const SymmetryCandidate& zeta,
                        const std::optional<WeakData>& weak, const PhasePoint& x) {
  const FieldValue v = zeta(x);
  const double h = sys.hamiltonian.value(x, sys.params);
  double j = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) j += x.p[i] * v.xi[i];
  j -= h * v.tau;
  if (weak) j += weak->beta.at(x, sys.params)(v) - weak->gauge_value(x, sys.params);
  return j;
}

Jet2 noether_integral_jet(const SystemSpec& sys, const SymmetryCandidate& zeta,
                          const std::optional<WeakData>& weak, const PhasePoint& x) {
  const std::size_t n = sys.n;
  const FieldJet zj = zeta.jet(x);
  const Jet2 h = sys.h_jet(x, 1);
  const std::size_t dim = zj.dim;
  Jet2 out;
  out.order = 1;
  out.dim = dim;
  out.gradient.assign(dim, 0.0);
  out.hessian.assign(dim * dim, 0.0);
  double j = 0.0;
  for (std::size_t i = 0; i < n; ++i) j += x.p[i] * zj.value.xi[i];
  j -= h.value * zj.value.tau;
  for (std::size_t k = 0; k < dim; ++k) {
    double g = -h.d(k) * zj.value.tau - h.value * zj.d(0, k);
    for (std::size_t i = 0; i < n; ++i) g += x.p[i] * zj.d(q_index(n, i), k);
    out.gradient[k] = g;
  }
  for (std::size_t i = 0; i < n; ++i) out.gradient[p_index(n, i)] += zj.value.xi[i];
  if (weak) {
    const OneFormValue b = weak->beta.at(x, sys.params);
    const std::vector<double> bf = b.flat();
    const std::vector<double> vf = zj.value.flat();
    j += b(zj.value);
    const std::vector<double> gb = beta_pairing_gradient(*weak, sys.params, x, vf, zj.jac, bf);
    for (std::size_t k = 0; k < dim; ++k) out.gradient[k] += gb[k];
    if (weak->gauge) {
      const Jet2 f = weak->gauge->jet(x, sys.params, 1);
      j -= f.value;
      for (std::size_t k = 0; k < dim; ++k) out.gradient[k] -= f.d(k);
    }
  }
  out.value = j;
  return out;
}

double directional_derivative(const SystemSpec& sys, const Expression& F, const FieldValue& v,
                              const PhasePoint& x) {
  const Jet2 f = F.jet(x, sys.params, 1);
  double s = 0.0;
  for (std::size_t k = 0; k < f.dim; ++k) s += f.d(k) * v.comp(k);
  return s;
}

FieldValue contact_hamiltonian_field(const SystemSpec& sys, const Expression& f,
                                     const PhasePoint& x, double eps_rho) {
  const std::size_t n = sys.n;
  const std::size_t dim = extended_dim(n);
  const FieldValue reeb = reeb_field(sys, x, eps_rho);
  const OneFormValue alpha = pc_form(sys, x);
  const Jet2 fj = f.jet(x, sys.params, 1);
  const Jet2 hj = sys.h_jet(x, 1);
  double reeb_f = 0.0;
  for (std::size_t k = 0; k < dim; ++k) reeb_f += fj.d(k) * reeb.comp(k);

  // Rows 0..dim-1: i_Y d alpha = -(df - R(f) alpha); last row: alpha(Y) = 0.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim + 1),
                                            static_cast<Eigen::Index>(dim));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim + 1));
  const std::vector<double> alpha_flat = alpha.flat();
  for (std::size_t col = 0; col < dim; ++col) {
    FieldValue e = FieldValue::zero(n);
    e.comp(col) = 1.0;
    const std::vector<double> form = dpc_contract(hj, e).flat();
    for (std::size_t row = 0; row < dim; ++row) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = form[row];
    }
    m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(col)) = alpha_flat[col];
  }
  for (std::size_t row = 0; row < dim; ++row) {
    rhs(static_cast<Eigen::Index>(row)) = -(fj.d(row) - reeb_f * alpha_flat[row]);
  }
  const Eigen::VectorXd horizontal = m.colPivHouseholderQr().solve(rhs);
  FieldValue out = reeb;
  out *= fj.value;
  for (std::size_t k = 0; k < dim; ++k) out.comp(k) += horizontal(static_cast<Eigen::Index>(k));
  return out;
}

FieldValue weak_to_strong(const SystemSpec& sys, const SymmetryCandidate& zeta,
                          const WeakData& weak, const PhasePoint& x, double eps_rho) {
  const double rho = elementary_action(sys, x);
  check_rho(rho, eps_rho);
  const FieldValue v = zeta(x);
  const double nu = (weak.beta.at(x, sys.params)(v) - weak.gauge_value(x, sys.params)) / rho;
  FieldValue out = characteristic_field(sys, x);
  out *= nu;
  out += v;
  return out;
}

SymmetryCandidate weak_to_strong_candidate(const SystemSpec& sys, const SymmetryCandidate& zeta,
                                           const WeakData& weak, double eps_rho) {
  SymmetryCandidate::Evaluator eval = [sys, zeta, weak, eps_rho](const PhasePoint& x) {
    return weak_to_strong(sys, zeta, weak, x, eps_rho);
  };
  SymmetryCandidate::JetEvaluator jet;
  if (zeta.has_exact_jacobian()) {
    jet = [sys, zeta, weak, eps_rho](const PhasePoint& x) {
      const CharacteristicJet c = characteristic_jet(sys.h_jet(x, 2), x);
      check_rho(c.rho, eps_rho);
      const FieldJet zj = zeta.jet(x);
      const std::size_t dim = c.dim;
      const OneFormValue b = weak.beta.at(x, sys.params);
      const std::vector<double> vf = zj.value.flat();
      const std::vector<double> gb =
          beta_pairing_gradient(weak, sys.params, x, vf, zj.jac, b.flat());
      double f = 0.0;
      std::vector<double> grad_f(dim, 0.0);
      if (weak.gauge) {
        const Jet2 fj = weak.gauge->jet(x, sys.params, 1);
        f = fj.value;
        grad_f = fj.gradient;
      }
      const double nu = (b(zj.value) - f) / c.rho;
      FieldJet out;
      out.dim = dim;
      out.jac = zj.jac;
      for (std::size_t k = 0; k < dim; ++k) {
        const double grad_nu = (gb[k] - grad_f[k] - nu * c.grad_rho[k]) / c.rho;
        for (std::size_t i = 0; i < dim; ++i) {
          out.jac[i * dim + k] += c.z[i] * grad_nu + nu * c.jac[i * dim + k];
        }
      }
      out.value = weak_to_strong(sys, zeta, weak, x, eps_rho);
      return out;
    };
  }
  SymmetryCandidate out(SymmetryCandidate::Provenance::converted, zeta.label() + "~", sys.n,
                        std::move(eval), std::move(jet));
  return out;
}

SymmetryCandidate adjusted_candidate(const SystemSpec& sys, const SymmetryCandidate& zeta) {
  SymmetryCandidate::Evaluator eval = [sys, zeta](const PhasePoint& x) {
    FieldValue v = zeta(x);
    const double tau = v.tau;
    FieldValue z = characteristic_field(sys, x);
    z *= tau;
    v -= z;
    v.tau = 0.0;
    return v;
  };
  SymmetryCandidate::JetEvaluator jet;
  if (zeta.has_exact_jacobian()) {
    jet = [sys, zeta, eval](const PhasePoint& x) {
      const CharacteristicJet c = characteristic_jet(sys.h_jet(x, 2), x);
      const FieldJet zj = zeta.jet(x);
      const std::size_t dim = c.dim;
      const double tau = zj.value.tau;
      FieldJet out;
      out.dim = dim;
      out.jac = zj.jac;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
          out.jac[i * dim + k] -= c.z[i] * zj.d(0, k) + tau * c.jac[i * dim + k];
        }
      }
      for (std::size_t k = 0; k < dim; ++k) out.jac[k] = 0.0;
      out.value = eval(x);
      return out;
    };
  }
  return SymmetryCandidate(SymmetryCandidate::Provenance::adjusted, zeta.label() + "'", sys.n,
                           std::move(eval), std::move(jet));
}

FieldValue lie_bracket(const SystemSpec& sys, const SymmetryCandidate& v,
                       const SymmetryCandidate& w, const PhasePoint& x, double h_bracket) {
  (void)sys;
  const FieldJet vj = v.jet(x, h_bracket);
  const FieldJet wj = w.jet(x, h_bracket);
  const std::size_t dim = vj.dim;
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      s += wj.d(i, k) * vj.value.comp(k) - vj.d(i, k) * wj.value.comp(k);
    }
    out[i] = s;
  }
  return FieldValue::from_flat(out);
}

double kernel_membership(const SystemSpec& sys, const FieldValue& v, const PhasePoint& x) {
  return dpc_contract(sys, v, x).max_norm();
}

}  // namespace noether
