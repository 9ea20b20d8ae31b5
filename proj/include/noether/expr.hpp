#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "noether/phase_space.hpp"

namespace noether {

/// Named numeric parameters bound at evaluation time (e.g. mu for Kepler).
using Params = std::map<std::string, double, std::less<>>;

enum class NodeKind { number, pi, variable, parameter, negate, add, sub, mul, div, pow, call };

enum class Function { sin, cos, tan, exp, log, sqrt };

/// Expression-tree node. Trees are immutable and shared between copies.
struct Node {
  NodeKind kind = NodeKind::number;
  double number = 0.0;
  std::size_t variable = 0;  // flat coordinate index for NodeKind::variable
  std::string name;          // parameter name
  Function function = Function::sin;
  std::vector<std::shared_ptr<const Node>> children;
};

/// Value, gradient and Hessian of a scalar field at a point, in the flat
/// coordinate order (t, q1..qn, p1..pn). Entries above `order` are zero.
struct Jet2 {
  int order = 0;
  std::size_t dim = 0;
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<double> hessian;  // row-major dim x dim, symmetric

  bool has_gradient() const { return order >= 1; }
  bool has_hessian() const { return order >= 2; }
  double d(std::size_t i) const { return gradient[i]; }
  double d2(std::size_t i, std::size_t j) const { return hessian[i * dim + j]; }
};

/// A parsed scalar field on the extended phase space of dimension 2n+1.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text, std::size_t n,
                          const std::set<std::string, std::less<>>& param_names = {});

  /// Constant expression, not parsed from text.
  static Expression constant(double value, std::size_t n);

  std::size_t dim() const { return n_; }
  bool empty() const { return root_ == nullptr; }
  const Node& root() const { return *root_; }

  /// Fully parenthesised text that reparses to the same tree.
  std::string str() const;

  /// Text as given to parse; str() for constructed expressions.
  std::string source() const { return source_.empty() ? str() : source_; }

  /// Parameter names referenced anywhere in the tree.
  std::set<std::string> parameters() const;

  double value(const PhasePoint& x, const Params& params) const;
  Jet2 jet(const PhasePoint& x, const Params& params, int order) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  Expression(std::shared_ptr<const Node> root, std::size_t n) : root_(std::move(root)), n_(n) {}

  std::shared_ptr<const Node> root_;
  std::size_t n_ = 0;
  std::string source_;
};

bool structurally_equal(const Node& a, const Node& b);
std::string to_string(const Node& node, std::size_t n);

Expression parse_expression(std::string_view text, std::size_t n,
                            const std::set<std::string, std::less<>>& param_names = {});

/// Forward-mode AD evaluation to the requested order (0, 1 or 2).
Jet2 eval_jet(const Expression& expr, const PhasePoint& x, const Params& params, int order);

/// Central-difference gradient and second-difference Hessian. Uses only
/// plain value evaluation; kept independent of the AD path.
Jet2 fd_jet(const Expression& expr, const PhasePoint& x, const Params& params, double h = 1e-5);

}  // namespace noether
