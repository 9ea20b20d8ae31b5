#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "noether/expr.hpp"
#include "noether/geometry.hpp"
#include "noether/noether.hpp"

namespace noether {

enum class Generator { characteristic, symmetry, symmetry_image };

struct Trajectory {
  std::vector<PhasePoint> samples;
  double step = 0.0;
  Generator generator = Generator::characteristic;
};

/// Fixed-step classical RK4 for t' = 1, q' = H_p, p' = -H_q. If duration is
/// not an integer multiple of step, the step is shrunk uniformly to fit.
Trajectory integrate_characteristic(const SystemSpec& sys, const PhasePoint& x0, double duration,
                                    double step);

/// Integrates dx/ds = zeta(x) over parameter length s (either sign).
Trajectory flow_symmetry(const SystemSpec& sys, const SymmetryCandidate& zeta,
                         const PhasePoint& x0, double s, double step);

/// max_k |F(x_k) - F(x_0)|.
double conservation_drift(const Expression& F, const Trajectory& traj, const Params& params);

/// Same, for a scalar function that is not an Expression (e.g. a Noether integral).
double conservation_drift(const std::function<double(const PhasePoint&)>& F,
                          const Trajectory& traj);

/// Trapezoidal integral of p dq - H dt + beta over the sampled curve.
double action_integral(const SystemSpec& sys, const Trajectory& traj);

/// Maps a characteristic trajectory through the time-s flow of zeta and
/// returns the largest normalised kernel defect of the image tangents
/// (five-point centred differences; two samples at each end are skipped).
double permutation_check(const SystemSpec& sys, const SymmetryCandidate& zeta,
                         const Trajectory& traj, double s, double flow_step = 1e-4);

/// Perturbation profile: sample index and curve parameter theta in [0,1].
using VariationProfile = std::function<FieldValue(std::size_t index, double theta)>;

/// sin(pi theta) * direction; vanishes at both endpoints.
VariationProfile bump_profile(FieldValue direction);

struct StationarityResult {
  std::vector<std::pair<double, double>> samples;  // (amplitude, action)
  double base_action = 0.0;
  double slope = 0.0;      // fitted first variation at amplitude 0
  double curvature = 0.0;  // fitted quadratic coefficient
  double cubic = 0.0;      // fitted when at least three amplitudes are given
};

/// Perturbs the curve by amplitude * profile for each amplitude, recomputes
/// the action and fits action = base + slope a + curvature a^2 + cubic a^3.
StationarityResult stationarity_probe(const SystemSpec& sys, const Trajectory& traj,
                                      const VariationProfile& profile,
                                      const std::vector<double>& amplitudes);

/// CSV with header t,q1..qn,p1..pn at 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace noether
