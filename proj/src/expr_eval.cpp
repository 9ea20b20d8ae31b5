#include <cmath>
#include <numbers>

#include "noether/errors.hpp"
#include "noether/expr.hpp"

namespace noether {

namespace {

// Truncated second-order Taylor arithmetic. Hessians are filled on the upper
// triangle and mirrored so they are symmetric bit for bit.
struct Jet {
  double v = 0.0;
  std::vector<double> g;
  std::vector<double> h;
};

class JetEvaluator {
 public:
  JetEvaluator(std::size_t n, const PhasePoint& x, const Params& params, int order)
      : n_(n), dim_(extended_dim(n)), x_(x), params_(params), order_(order) {}

  Jet eval(const Node& node) const {
    switch (node.kind) {
      case NodeKind::number: return constant(node.number);
      case NodeKind::pi: return constant(std::numbers::pi);
      case NodeKind::parameter: return constant(parameter(node.name));
      case NodeKind::variable: {
        Jet j = constant(x_.coord(node.variable));
        if (order_ >= 1) j.g[node.variable] = 1.0;
        return j;
      }
      case NodeKind::negate: {
        Jet a = eval(*node.children[0]);
        a.v = -a.v;
        for (double& e : a.g) e = -e;
        for (double& e : a.h) e = -e;
        return a;
      }
      case NodeKind::add: return add(eval(*node.children[0]), eval(*node.children[1]), 1.0);
      case NodeKind::sub: return add(eval(*node.children[0]), eval(*node.children[1]), -1.0);
      case NodeKind::mul: return mul(eval(*node.children[0]), eval(*node.children[1]));
      case NodeKind::div: return div(node, eval(*node.children[0]), eval(*node.children[1]));
      case NodeKind::pow: return pow(node);
      case NodeKind::call: return call(node, eval(*node.children[0]));
    }
    return constant(0.0);
  }

 private:
  double parameter(const std::string& name) const {
    const auto it = params_.find(name);
    if (it == params_.end()) throw MissingParameter(name);
    return it->second;
  }

  Jet constant(double v) const {
    Jet j;
    j.v = v;
    if (order_ >= 1) j.g.assign(dim_, 0.0);
    if (order_ >= 2) j.h.assign(dim_ * dim_, 0.0);
    return j;
  }

  template <typename F>
  void fill_upper(std::vector<double>& h, F&& entry) const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = i; k < dim_; ++k) {
        const double e = entry(i, k);
        h[i * dim_ + k] = e;
        h[k * dim_ + i] = e;
      }
    }
  }

  Jet add(const Jet& a, const Jet& b, double sign) const {
    Jet r;
    r.v = sign > 0 ? a.v + b.v : a.v - b.v;
    if (order_ >= 1) {
      r.g.resize(dim_);
      for (std::size_t i = 0; i < dim_; ++i) r.g[i] = sign > 0 ? a.g[i] + b.g[i] : a.g[i] - b.g[i];
    }
    if (order_ >= 2) {
      r.h.resize(dim_ * dim_);
      for (std::size_t i = 0; i < dim_ * dim_; ++i) {
        r.h[i] = sign > 0 ? a.h[i] + b.h[i] : a.h[i] - b.h[i];
      }
    }
    return r;
  }

  Jet mul(const Jet& a, const Jet& b) const {
    Jet r;
    r.v = a.v * b.v;
    if (order_ >= 1) {
      r.g.resize(dim_);
      for (std::size_t i = 0; i < dim_; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    }
    if (order_ >= 2) {
      r.h.resize(dim_ * dim_);
      fill_upper(r.h, [&](std::size_t i, std::size_t k) {
        return a.h[i * dim_ + k] * b.v + a.v * b.h[i * dim_ + k] + a.g[i] * b.g[k] +
               b.g[i] * a.g[k];
      });
    }
    return r;
  }

  Jet div(const Node& node, const Jet& a, const Jet& b) const {
    if (b.v == 0.0) throw DomainError("division by zero", to_string(node, n_));
    Jet r;
    r.v = a.v / b.v;
    if (order_ >= 1) {
      r.g.resize(dim_);
      for (std::size_t i = 0; i < dim_; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) / b.v;
    }
    if (order_ >= 2) {
      r.h.resize(dim_ * dim_);
      fill_upper(r.h, [&](std::size_t i, std::size_t k) {
        return (a.h[i * dim_ + k] - r.v * b.h[i * dim_ + k] - b.g[i] * r.g[k] -
                r.g[i] * b.g[k]) /
               b.v;
      });
    }
    return r;
  }

  // Composition phi(a) given phi, phi', phi'' at a.v.
  Jet compose(const Jet& a, double f0, double f1, double f2) const {
    Jet r;
    r.v = f0;
    if (order_ >= 1) {
      r.g.resize(dim_);
      for (std::size_t i = 0; i < dim_; ++i) r.g[i] = f1 * a.g[i];
    }
    if (order_ >= 2) {
      r.h.resize(dim_ * dim_);
      fill_upper(r.h, [&](std::size_t i, std::size_t k) {
        return f1 * a.h[i * dim_ + k] + f2 * a.g[i] * a.g[k];
      });
    }
    return r;
  }

  static bool variable_free(const Node& node) {
    if (node.kind == NodeKind::variable) return false;
    for (const auto& child : node.children) {
      if (!variable_free(*child)) return false;
    }
    return true;
  }

  Jet pow(const Node& node) const {
    const Jet base = eval(*node.children[0]);
    const Node& exponent = *node.children[1];
    if (variable_free(exponent)) {
      const double c = eval(exponent).v;
      const double x = base.v;
      const bool integral = std::floor(c) == c;
      if (x == 0.0 && c < 0.0) throw DomainError("0 raised to a negative power", to_string(node, n_));
      if (x < 0.0 && !integral) {
        throw DomainError("negative base with non-integer exponent", to_string(node, n_));
      }
      if (x == 0.0 && !integral && c < order_) {
        throw DomainError("power not differentiable at 0", to_string(node, n_));
      }
      const double f0 = std::pow(x, c);
      const double f1 = (order_ >= 1 && c != 0.0) ? c * std::pow(x, c - 1.0) : 0.0;
      const double f2 =
          (order_ >= 2 && c != 0.0 && c != 1.0) ? c * (c - 1.0) * std::pow(x, c - 2.0) : 0.0;
      return compose(base, f0, f1, f2);
    }
    if (base.v <= 0.0) {
      throw DomainError("non-positive base with variable exponent", to_string(node, n_));
    }
    const double lx = std::log(base.v);
    const Jet log_base = compose(base, lx, 1.0 / base.v, -1.0 / (base.v * base.v));
    const Jet product = mul(eval(exponent), log_base);
    const double e = std::exp(product.v);
    Jet r = compose(product, e, e, e);
    r.v = std::pow(base.v, eval(exponent).v);
    return r;
  }

  Jet call(const Node& node, const Jet& a) const {
    const double x = a.v;
    switch (node.function) {
      case Function::sin: return compose(a, std::sin(x), std::cos(x), -std::sin(x));
      case Function::cos: return compose(a, std::cos(x), -std::sin(x), -std::cos(x));
      case Function::tan: {
        const double c = std::cos(x);
        if (c == 0.0) throw DomainError("tan at a pole", to_string(node, n_));
        const double t = std::tan(x);
        const double sec2 = 1.0 / (c * c);
        return compose(a, t, sec2, 2.0 * t * sec2);
      }
      case Function::exp: {
        const double e = std::exp(x);
        return compose(a, e, e, e);
      }
      case Function::log:
        if (x <= 0.0) throw DomainError("log of nonpositive value", to_string(node, n_));
        return compose(a, std::log(x), 1.0 / x, -1.0 / (x * x));
      case Function::sqrt: {
        if (x < 0.0) throw DomainError("sqrt of negative value", to_string(node, n_));
        if (x == 0.0 && order_ >= 1) {
          throw DomainError("sqrt not differentiable at 0", to_string(node, n_));
        }
        const double s = std::sqrt(x);
        return compose(a, s, order_ >= 1 ? 0.5 / s : 0.0, order_ >= 2 ? -0.25 / (s * x) : 0.0);
      }
    }
    return a;
  }

  std::size_t n_;
  std::size_t dim_;
  const PhasePoint& x_;
  const Params& params_;
  int order_;
};

void check_point(const Expression& expr, const PhasePoint& x) {
  if (expr.empty()) throw Error("evaluating an empty expression");
  if (x.dim() != expr.dim() || x.p.size() != expr.dim()) {
    throw DimensionMismatch("point has n=" + std::to_string(x.dim()) + ", expression expects n=" +
                            std::to_string(expr.dim()));
  }
}

}  // namespace

double Expression::value(const PhasePoint& x, const Params& params) const {
  return jet(x, params, 0).value;
}

Jet2 Expression::jet(const PhasePoint& x, const Params& params, int order) const {
  check_point(*this, x);
  if (order < 0 || order > 2) throw Error("jet order must be 0, 1 or 2");
  const JetEvaluator evaluator(n_, x, params, order);
  Jet j = evaluator.eval(*root_);
  Jet2 out;
  out.order = order;
  out.dim = extended_dim(n_);
  out.value = j.v;
  out.gradient = order >= 1 ? std::move(j.g) : std::vector<double>(out.dim, 0.0);
  out.hessian = order >= 2 ? std::move(j.h) : std::vector<double>(out.dim * out.dim, 0.0);
  return out;
}

Jet2 eval_jet(const Expression& expr, const PhasePoint& x, const Params& params, int order) {
  return expr.jet(x, params, order);
}

Jet2 fd_jet(const Expression& expr, const PhasePoint& x, const Params& params, double h) {
  check_point(expr, x);
  if (!(h > 0.0)) throw Error("finite-difference step must be positive");
  const std::size_t dim = extended_dim(expr.dim());
  auto f = [&](std::size_t i, double si, std::size_t k, double sk) {
    PhasePoint y = x;
    y.coord(i) += si;
    y.coord(k) += sk;
    return expr.value(y, params);
  };
  Jet2 out;
  out.order = 2;
  out.dim = dim;
  out.value = expr.value(x, params);
  out.gradient.assign(dim, 0.0);
  out.hessian.assign(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double plus = f(i, h, i, 0.0);
    const double minus = f(i, -h, i, 0.0);
    out.gradient[i] = (plus - minus) / (2.0 * h);
    out.hessian[i * dim + i] = (plus - 2.0 * out.value + minus) / (h * h);
    for (std::size_t k = i + 1; k < dim; ++k) {
      const double e = (f(i, h, k, h) - f(i, h, k, -h) - f(i, -h, k, h) + f(i, -h, k, -h)) /
                       (4.0 * h * h);
      out.hessian[i * dim + k] = e;
      out.hessian[k * dim + i] = e;
    }
  }
  return out;
}

}  // namespace noether
