#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "noether/catalog.hpp"
#include "noether/flow.hpp"
#include "noether/sampling.hpp"

namespace testing_support {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double max_rel_err(const std::vector<double>& got, const std::vector<double>& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, rel_err(got[i], want[i]));
  return worst;
}

inline noether::PhasePoint kepler_star() { return noether::PhasePoint(0.0, {1.0, 0.0}, {0.0, 1.0}); }

/// Seeded points in the entry's stated domain.
inline std::vector<noether::PhasePoint> domain_points(const noether::CatalogEntry& e,
                                                      std::size_t count, std::uint64_t seed,
                                                      double min_abs_rho = 1e-3) {
  noether::SamplingOptions opts = e.domain;
  opts.min_abs_rho = min_abs_rho;
  std::vector<noether::Expression> exprs;
  for (const auto& [name, expr] : e.spec.integrals) exprs.push_back(expr);
  return noether::sample_points(e.spec, count, seed, opts, exprs);
}

/// Start points whose characteristic arc of the given duration is resolved by
/// RK4 at step 1e-3: for kepler the arc must keep r >= 0.4 (no near-collision).
inline std::vector<noether::PhasePoint> resolved_starts(const noether::CatalogEntry& e,
                                                        std::size_t count, std::uint64_t seed,
                                                        double duration = 1.0) {
  const auto pool = domain_points(e, 20 * count, seed, 0.1);
  std::vector<noether::PhasePoint> out;
  for (const auto& x : pool) {
    if (out.size() == count) break;
    if (e.name == "kepler") {
      const auto arc = noether::integrate_characteristic(e.spec, x, duration, 1e-3);
      double rmin = 1e300;
      for (const auto& s : arc.samples) rmin = std::min(rmin, std::hypot(s.q[0], s.q[1]));
      if (rmin < 0.4) continue;
    }
    out.push_back(x);
  }
  return out;
}

inline std::vector<noether::CatalogEntry> all_entries() {
  std::vector<noether::CatalogEntry> out;
  for (const auto& name : noether::builtin_names()) out.push_back(noether::builtin(name));
  return out;
}

}  // namespace testing_support
