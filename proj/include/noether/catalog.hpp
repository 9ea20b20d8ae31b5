#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noether/errors.hpp"
#include "noether/geometry.hpp"
#include "noether/noether.hpp"
#include "noether/sampling.hpp"

namespace noether {

/// A closed-form symmetry attached to one of the entry's integrals.
struct ReferenceSymmetry {
  std::string integral;
  SymmetryCandidate field;
};

struct CatalogEntry {
  std::string name;
  SystemSpec spec;
  std::vector<ReferenceSymmetry> reference_symmetries;
  std::vector<std::string> notes;
  SamplingOptions domain;  // box and guard of the stated domain

  const NamedExpressions& known_integrals() const { return spec.integrals; }
};

/// free1d, free2d, harmonic, kepler, geodesic_flat_quadratic, natural_shifted.
const std::vector<std::string>& builtin_names();

/// Throws UnknownSystem.
CatalogEntry builtin(std::string_view name);

/// The printed closed-form coefficients of the symmetry of A_k (k = 1, 2) in
/// the planar Kepler problem with parameter mu.
FieldValue kepler_reference_symmetry(int k, const PhasePoint& x, double mu,
                                     double eps_rho = default_eps_rho);

}  // namespace noether
