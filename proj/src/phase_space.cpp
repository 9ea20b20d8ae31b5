#include "noether/phase_space.hpp"

#include <algorithm>
#include <cmath>

#include "noether/errors.hpp"

namespace noether {

namespace {

std::size_t half_dim(std::size_t flat_size) {
  if (flat_size % 2 == 0 || flat_size < 3) {
    throw DimensionMismatch("flat coordinate list must have odd length 2n+1 >= 3, got " +
                            std::to_string(flat_size));
  }
  return (flat_size - 1) / 2;
}

void check_same(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

PhasePoint::PhasePoint(double time, std::vector<double> config, std::vector<double> momenta)
    : t(time), q(std::move(config)), p(std::move(momenta)) {
  check_same(q.size(), p.size());
}

std::vector<double> PhasePoint::flat() const {
  std::vector<double> out;
  out.reserve(1 + q.size() + p.size());
  out.push_back(t);
  out.insert(out.end(), q.begin(), q.end());
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

PhasePoint PhasePoint::from_flat(std::span<const double> coords) {
  const std::size_t n = half_dim(coords.size());
  return PhasePoint(coords[0], std::vector<double>(coords.begin() + 1, coords.begin() + 1 + n),
                    std::vector<double>(coords.begin() + 1 + n, coords.end()));
}

double PhasePoint::coord(std::size_t k) const {
  if (k == 0) return t;
  return k <= q.size() ? q[k - 1] : p[k - 1 - q.size()];
}

double& PhasePoint::coord(std::size_t k) {
  if (k == 0) return t;
  return k <= q.size() ? q[k - 1] : p[k - 1 - q.size()];
}

FieldValue::FieldValue(double tau_, std::vector<double> xi_, std::vector<double> eta_)
    : tau(tau_), xi(std::move(xi_)), eta(std::move(eta_)) {
  check_same(xi.size(), eta.size());
}

FieldValue FieldValue::zero(std::size_t n) {
  return FieldValue(0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

std::vector<double> FieldValue::flat() const {
  std::vector<double> out;
  out.reserve(1 + xi.size() + eta.size());
  out.push_back(tau);
  out.insert(out.end(), xi.begin(), xi.end());
  out.insert(out.end(), eta.begin(), eta.end());
  return out;
}

FieldValue FieldValue::from_flat(std::span<const double> comps) {
  const std::size_t n = half_dim(comps.size());
  return FieldValue(comps[0], std::vector<double>(comps.begin() + 1, comps.begin() + 1 + n),
                    std::vector<double>(comps.begin() + 1 + n, comps.end()));
}

double FieldValue::comp(std::size_t k) const {
  if (k == 0) return tau;
  return k <= xi.size() ? xi[k - 1] : eta[k - 1 - xi.size()];
}

double& FieldValue::comp(std::size_t k) {
  if (k == 0) return tau;
  return k <= xi.size() ? xi[k - 1] : eta[k - 1 - xi.size()];
}

double FieldValue::max_norm() const {
  double m = std::abs(tau);
  for (double v : xi) m = std::max(m, std::abs(v));
  for (double v : eta) m = std::max(m, std::abs(v));
  return m;
}

FieldValue& FieldValue::operator+=(const FieldValue& other) {
  check_same(dim(), other.dim());
  tau += other.tau;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] += other.xi[i];
    eta[i] += other.eta[i];
  }
  return *this;
}

FieldValue& FieldValue::operator-=(const FieldValue& other) {
  check_same(dim(), other.dim());
  tau -= other.tau;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] -= other.xi[i];
    eta[i] -= other.eta[i];
  }
  return *this;
}

FieldValue& FieldValue::operator*=(double s) {
  tau *= s;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] *= s;
    eta[i] *= s;
  }
  return *this;
}

FieldValue operator+(FieldValue a, const FieldValue& b) { return a += b; }
FieldValue operator-(FieldValue a, const FieldValue& b) { return a -= b; }
FieldValue operator*(double s, FieldValue v) { return v *= s; }

PhasePoint displace(const PhasePoint& x, const FieldValue& v, double s) {
  check_same(x.dim(), v.dim());
  PhasePoint y = x;
  y.t += s * v.tau;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    y.q[i] += s * v.xi[i];
    y.p[i] += s * v.eta[i];
  }
  return y;
}

OneFormValue::OneFormValue(double a_, std::vector<double> b_, std::vector<double> c_)
    : a(a_), b(std::move(b_)), c(std::move(c_)) {
  check_same(b.size(), c.size());
}

OneFormValue OneFormValue::zero(std::size_t n) {
  return OneFormValue(0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

std::vector<double> OneFormValue::flat() const {
  std::vector<double> out;
  out.reserve(1 + b.size() + c.size());
  out.push_back(a);
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

OneFormValue OneFormValue::from_flat(std::span<const double> comps) {
  const std::size_t n = half_dim(comps.size());
  return OneFormValue(comps[0], std::vector<double>(comps.begin() + 1, comps.begin() + 1 + n),
                      std::vector<double>(comps.begin() + 1 + n, comps.end()));
}

double OneFormValue::max_norm() const {
  double m = std::abs(a);
  for (double v : b) m = std::max(m, std::abs(v));
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

double OneFormValue::operator()(const FieldValue& v) const {
  check_same(dim(), v.dim());
  double s = a * v.tau;
  for (std::size_t i = 0; i < b.size(); ++i) s += b[i] * v.xi[i] + c[i] * v.eta[i];
  return s;
}

}  // namespace noether
