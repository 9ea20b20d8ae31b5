#include "noether/sampling.hpp"

#include <cmath>

namespace noether {

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

namespace {

bool admissible(const SystemSpec& sys, const PhasePoint& x, const SamplingOptions& options,
                const std::vector<Expression>& must_evaluate) {
  if (options.guard && !options.guard(x)) return false;
  try {
    const Jet2 h = sys.h_jet(x, 2);
    if (!std::isfinite(h.value)) return false;
    if (options.min_abs_rho > 0.0 &&
        !(std::abs(perturbed_elementary_action(sys, x)) > options.min_abs_rho)) {
      return false;
    }
    for (const Expression& e : must_evaluate) {
      if (!std::isfinite(e.jet(x, sys.params, 2).value)) return false;
    }
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

}  // namespace

std::vector<PhasePoint> sample_points(const SystemSpec& sys, std::size_t count, std::uint64_t seed,
                                      const SamplingOptions& options,
                                      const std::vector<Expression>& must_evaluate) {
  Rng rng(seed);
  const std::size_t dim = extended_dim(sys.n);
  std::vector<PhasePoint> out;
  out.reserve(count);
  std::vector<double> coords(dim);
  for (std::size_t i = 0; i < count; ++i) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < options.max_attempts && !found; ++attempt) {
      for (double& c : coords) c = rng.uniform(options.lo, options.hi);
      PhasePoint x = PhasePoint::from_flat(coords);
      if (admissible(sys, x, options, must_evaluate)) {
        out.push_back(std::move(x));
        found = true;
      }
    }
    if (!found) {
      throw SamplingError("no admissible point found after " +
                          std::to_string(options.max_attempts) + " attempts (sample " +
                          std::to_string(i) + ")");
    }
  }
  return out;
}

}  // namespace noether
