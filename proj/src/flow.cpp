#include "noether/flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "noether/errors.hpp"

namespace noether {

namespace {

std::size_t step_count(double length, double& step) {
  if (!(step > 0.0)) throw Error("integration step must be positive");
  if (!(std::abs(length) > 0.0) || !std::isfinite(length)) {
    throw Error("integration length must be finite and nonzero");
  }
  const double ratio = std::abs(length) / step;
  const auto k = static_cast<std::size_t>(std::max(1.0, std::round(ratio)));
  step = length / static_cast<double>(k);
  return k;
}

std::vector<double> vector_field(const SystemSpec& sys, const std::vector<double>& state) {
  const PhasePoint x = PhasePoint::from_flat(state);
  return characteristic_field(sys, x).flat();
}

template <typename Field>
std::vector<double> rk4_step(const Field& f, const std::vector<double>& y, double h) {
  const std::size_t d = y.size();
  auto shifted = [&](const std::vector<double>& k, double c) {
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = y[i] + c * k[i];
    return out;
  };
  const std::vector<double> k1 = f(y);
  const std::vector<double> k2 = f(shifted(k1, h / 2));
  const std::vector<double> k3 = f(shifted(k2, h / 2));
  const std::vector<double> k4 = f(shifted(k3, h));
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace

Trajectory integrate_characteristic(const SystemSpec& sys, const PhasePoint& x0, double duration,
                                    double step) {
  if (!(duration > 0.0)) throw Error("duration must be positive");
  double h = step;
  const std::size_t k = step_count(duration, h);
  Trajectory traj;
  traj.step = h;
  traj.generator = Generator::characteristic;
  traj.samples.reserve(k + 1);
  traj.samples.push_back(x0);
  std::vector<double> y = x0.flat();
  auto field = [&](const std::vector<double>& s) { return vector_field(sys, s); };
  for (std::size_t i = 1; i <= k; ++i) {
    try {
      y = rk4_step(field, y, h);
    } catch (const DomainError& e) {
      throw DomainError("evaluation failed during integration", e.subtree(), i);
    }
    // t is linear in the step index; avoid accumulating round-off in it.
    y[0] = x0.t + static_cast<double>(i) * h;
    traj.samples.push_back(PhasePoint::from_flat(y));
  }
  return traj;
}

Trajectory flow_symmetry(const SystemSpec& sys, const SymmetryCandidate& zeta,
                         const PhasePoint& x0, double s, double step) {
  (void)sys;
  double h = step;
  const std::size_t k = step_count(s, h);
  Trajectory traj;
  traj.step = h;
  traj.generator = Generator::symmetry;
  traj.samples.reserve(k + 1);
  traj.samples.push_back(x0);
  std::vector<double> y = x0.flat();
  auto field = [&](const std::vector<double>& state) {
    return zeta(PhasePoint::from_flat(state)).flat();
  };
  for (std::size_t i = 1; i <= k; ++i) {
    try {
      y = rk4_step(field, y, h);
    } catch (const DomainError& e) {
      throw DomainError("evaluation failed during symmetry flow", e.subtree(), i);
    }
    traj.samples.push_back(PhasePoint::from_flat(y));
  }
  return traj;
}

double conservation_drift(const Expression& F, const Trajectory& traj, const Params& params) {
  return conservation_drift([&](const PhasePoint& x) { return F.value(x, params); }, traj);
}

double conservation_drift(const std::function<double(const PhasePoint&)>& F,
                          const Trajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  const double f0 = F(traj.samples.front());
  double drift = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    drift = std::max(drift, std::abs(F(traj.samples[i]) - f0));
  }
  return drift;
}

double action_integral(const SystemSpec& sys, const Trajectory& traj) {
  if (traj.samples.size() < 2) throw Error("action needs at least two samples");
  const std::size_t n = sys.n;
  auto h_at = [&](const PhasePoint& x) { return sys.hamiltonian.value(x, sys.params); };
  auto beta_at = [&](const PhasePoint& x) {
    return sys.beta ? sys.beta->at(x, sys.params) : OneFormValue::zero(n);
  };
  double total = 0.0;
  double h_prev = h_at(traj.samples[0]);
  OneFormValue b_prev = beta_at(traj.samples[0]);
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    const PhasePoint& a = traj.samples[k];
    const PhasePoint& b = traj.samples[k + 1];
    const double h_next = h_at(b);
    const OneFormValue b_next = beta_at(b);
    const double dt = b.t - a.t;
    double seg = -0.5 * (h_prev + h_next) * dt;
    seg += 0.5 * (b_prev.a + b_next.a) * dt;
    for (std::size_t i = 0; i < n; ++i) {
      const double dq = b.q[i] - a.q[i];
      const double dp = b.p[i] - a.p[i];
      seg += 0.5 * (a.p[i] + b.p[i]) * dq;
      seg += 0.5 * (b_prev.b[i] + b_next.b[i]) * dq + 0.5 * (b_prev.c[i] + b_next.c[i]) * dp;
    }
    total += seg;
    h_prev = h_next;
    b_prev = b_next;
  }
  return total;
}

double permutation_check(const SystemSpec& sys, const SymmetryCandidate& zeta,
                         const Trajectory& traj, double s, double flow_step) {
  if (traj.samples.size() < 3) throw Error("permutation check needs at least three samples");
  std::vector<PhasePoint> image;
  image.reserve(traj.samples.size());
  for (const PhasePoint& x : traj.samples) {
    image.push_back(flow_symmetry(sys, zeta, x, s, flow_step).samples.back());
  }
  // Five-point centred differences; with fewer than five samples, three-point.
  const std::size_t count = image.size();
  const bool wide = count >= 5;
  const std::size_t margin = wide ? 2 : 1;
  double worst = 0.0;
  for (std::size_t k = margin; k + margin < count; ++k) {
    const std::size_t dim = image[k].flat().size();
    std::vector<double> tangent(dim);
    if (wide) {
      const auto a2 = image[k + 2].flat(), a1 = image[k + 1].flat();
      const auto b1 = image[k - 1].flat(), b2 = image[k - 2].flat();
      for (std::size_t i = 0; i < dim; ++i) {
        tangent[i] = (-a2[i] + 8.0 * a1[i] - 8.0 * b1[i] + b2[i]) / 12.0;
      }
    } else {
      const auto a1 = image[k + 1].flat(), b1 = image[k - 1].flat();
      for (std::size_t i = 0; i < dim; ++i) tangent[i] = (a1[i] - b1[i]) / 2.0;
    }
    const FieldValue v = FieldValue::from_flat(tangent);
    const double norm = v.max_norm();
    if (norm == 0.0) continue;
    worst = std::max(worst, kernel_membership(sys, v, image[k]) / norm);
  }
  return worst;
}

VariationProfile bump_profile(FieldValue direction) {
  return [direction = std::move(direction)](std::size_t, double theta) {
    FieldValue v = direction;
    v *= std::sin(std::numbers::pi * theta);
    return v;
  };
}

StationarityResult stationarity_probe(const SystemSpec& sys, const Trajectory& traj,
                                      const VariationProfile& profile,
                                      const std::vector<double>& amplitudes) {
  const std::size_t count = traj.samples.size();
  if (count < 2) throw Error("stationarity probe needs at least two samples");
  std::vector<FieldValue> deltas;
  deltas.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    deltas.push_back(profile(k, static_cast<double>(k) / static_cast<double>(count - 1)));
  }
  for (std::size_t end : {std::size_t{0}, count - 1}) {
    if (deltas[end].max_norm() != 0.0 &&
        !is_horizontal(sys, deltas[end], traj.samples[end]).horizontal) {
      throw Error("variation must vanish or be horizontal at the endpoints");
    }
  }
  StationarityResult result;
  result.base_action = action_integral(sys, traj);
  Trajectory perturbed = traj;
  for (double amp : amplitudes) {
    if (amp == 0.0) {
      result.samples.emplace_back(0.0, result.base_action);
      continue;
    }
    for (std::size_t k = 0; k < count; ++k) {
      perturbed.samples[k] = displace(traj.samples[k], deltas[k], amp);
    }
    result.samples.emplace_back(amp, action_integral(sys, perturbed));
  }
  // Least squares in the offset from the base action keeps the fit well scaled.
  // A cubic term absorbs the odd response that would otherwise bias the slope.
  const auto rows = static_cast<Eigen::Index>(result.samples.size());
  const Eigen::Index cols = rows >= 3 ? 3 : 2;
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto [amp, action] = result.samples[static_cast<std::size_t>(i)];
    design(i, 0) = amp;
    design(i, 1) = amp * amp;
    if (cols == 3) design(i, 2) = amp * amp * amp;
    rhs(i) = action - result.base_action;
  }
  if (rows >= 2) {
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    result.slope = coef(0);
    result.curvature = coef(1);
    if (cols == 3) result.cubic = coef(2);
  }
  return result;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.samples.empty()) return;
  const std::size_t n = traj.samples.front().dim();
  out << 't';
  for (std::size_t i = 1; i <= n; ++i) out << ",q" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",p" << i;
  out << '\n';
  char buf[40];
  for (const PhasePoint& x : traj.samples) {
    bool first = true;
    for (double v : x.flat()) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!first) out << ',';
      out << buf;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace noether
