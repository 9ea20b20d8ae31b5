#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "noether/errors.hpp"
#include "noether/expr.hpp"
#include "noether/geometry.hpp"

namespace noether {

/// Seeded generator with a platform-independent mapping to doubles
/// (std::uniform_real_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

using PointGuard = std::function<bool(const PhasePoint&)>;

struct SamplingOptions {
  double lo = -2.0;
  double hi = 2.0;
  double min_abs_rho = 1e-3;  // 0 disables the contact guard
  std::size_t max_attempts = 100;
  PointGuard guard;           // extra domain restriction
};

class SamplingError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "SamplingError"; }
};

/// Draws `count` points uniformly in the box (t, q and p alike), resampling
/// each up to max_attempts times until the guards hold and H and every
/// expression in `must_evaluate` evaluate to second order.
std::vector<PhasePoint> sample_points(const SystemSpec& sys, std::size_t count, std::uint64_t seed,
                                      const SamplingOptions& options,
                                      const std::vector<Expression>& must_evaluate = {});

}  // namespace noether
