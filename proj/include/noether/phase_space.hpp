#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace noether {

// Flat coordinate ordering used everywhere: (t, q1..qn, p1..pn).
constexpr std::size_t t_index() { return 0; }
constexpr std::size_t q_index(std::size_t n, std::size_t i) { (void)n; return 1 + i; }
constexpr std::size_t p_index(std::size_t n, std::size_t i) { return 1 + n + i; }
constexpr std::size_t extended_dim(std::size_t n) { return 2 * n + 1; }

/// A point (t, q, p) of the extended phase space.
struct PhasePoint {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;

  PhasePoint() = default;
  PhasePoint(double time, std::vector<double> config, std::vector<double> momenta);

  std::size_t dim() const { return q.size(); }
  std::vector<double> flat() const;
  static PhasePoint from_flat(std::span<const double> coords);

  double coord(std::size_t k) const;
  double& coord(std::size_t k);

  bool operator==(const PhasePoint&) const = default;
};

/// Tangent vector tau d/dt + xi^i d/dq_i + eta^i d/dp_i.
struct FieldValue {
  double tau = 0.0;
  std::vector<double> xi;
  std::vector<double> eta;

  FieldValue() = default;
  FieldValue(double tau_, std::vector<double> xi_, std::vector<double> eta_);
  static FieldValue zero(std::size_t n);

  std::size_t dim() const { return xi.size(); }
  std::vector<double> flat() const;
  static FieldValue from_flat(std::span<const double> comps);

  double comp(std::size_t k) const;
  double& comp(std::size_t k);

  double max_norm() const;

  FieldValue& operator+=(const FieldValue& other);
  FieldValue& operator-=(const FieldValue& other);
  FieldValue& operator*=(double s);

  bool operator==(const FieldValue&) const = default;
};

FieldValue operator+(FieldValue a, const FieldValue& b);
FieldValue operator-(FieldValue a, const FieldValue& b);
FieldValue operator*(double s, FieldValue v);

/// Moves a point along a tangent vector: x + s v.
PhasePoint displace(const PhasePoint& x, const FieldValue& v, double s);

/// One-form a dt + b_i dq_i + c_i dp_i at a point.
struct OneFormValue {
  double a = 0.0;
  std::vector<double> b;
  std::vector<double> c;

  OneFormValue() = default;
  OneFormValue(double a_, std::vector<double> b_, std::vector<double> c_);
  static OneFormValue zero(std::size_t n);

  std::size_t dim() const { return b.size(); }
  std::vector<double> flat() const;
  static OneFormValue from_flat(std::span<const double> comps);

  double max_norm() const;

  /// Pairing with a tangent vector.
  double operator()(const FieldValue& v) const;

  bool operator==(const OneFormValue&) const = default;
};

}  // namespace noether
