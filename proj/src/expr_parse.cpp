#include <cctype>
#include <charconv>
#include <optional>

#include "noether/errors.hpp"
#include "noether/expr.hpp"

namespace noether {

namespace {

using NodePtr = std::shared_ptr<const Node>;

std::optional<Function> function_named(std::string_view name) {
  if (name == "sin") return Function::sin;
  if (name == "cos") return Function::cos;
  if (name == "tan") return Function::tan;
  if (name == "exp") return Function::exp;
  if (name == "log") return Function::log;
  if (name == "sqrt") return Function::sqrt;
  return std::nullopt;
}

const char* function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
  }
  return "?";
}

NodePtr make_leaf(NodeKind kind) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  return node;
}

NodePtr make_op(NodeKind kind, std::vector<NodePtr> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->children = std::move(children);
  return node;
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::end, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      return {Tok::ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::plus, start, src_.substr(start, 1)};
      case '-': return {Tok::minus, start, src_.substr(start, 1)};
      case '*': return {Tok::star, start, src_.substr(start, 1)};
      case '/': return {Tok::slash, start, src_.substr(start, 1)};
      case '^': return {Tok::caret, start, src_.substr(start, 1)};
      case '(': return {Tok::lparen, start, src_.substr(start, 1)};
      case ')': return {Tok::rparen, start, src_.substr(start, 1)};
      default: break;
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError(pos_, "exponent has no digits");
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    Token tok{Tok::number, start, text};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), tok.number);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw SyntaxError(start, "number out of range");
    }
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Recursive descent over
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?
//   unary  := "-" unary | atom
//   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
class Parser {
 public:
  Parser(std::string_view src, std::size_t n, const std::set<std::string, std::less<>>& params)
      : lexer_(src), n_(n), params_(params) {
    advance();
  }

  NodePtr parse() {
    NodePtr root = expr();
    if (cur_.kind != Tok::end) throw SyntaxError(cur_.pos, "unexpected trailing input");
    return root;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      throw SyntaxError(cur_.pos, std::string("expected ") + what);
    }
    advance();
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const NodeKind kind = cur_.kind == Tok::plus ? NodeKind::add : NodeKind::sub;
      advance();
      lhs = make_op(kind, {lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const NodeKind kind = cur_.kind == Tok::star ? NodeKind::mul : NodeKind::div;
      advance();
      lhs = make_op(kind, {lhs, factor()});
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (cur_.kind == Tok::caret) {
      advance();
      return make_op(NodeKind::pow, {base, factor()});
    }
    return base;
  }

  NodePtr unary() {
    if (cur_.kind == Tok::minus) {
      advance();
      return make_op(NodeKind::negate, {unary()});
    }
    return atom();
  }

  NodePtr atom() {
    switch (cur_.kind) {
      case Tok::number: {
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::number;
        node->number = cur_.number;
        advance();
        return node;
      }
      case Tok::lparen: {
        advance();
        NodePtr inner = expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident: return identifier();
      case Tok::end: throw SyntaxError(cur_.pos, "unexpected end of input");
      default: throw SyntaxError(cur_.pos, "unexpected '" + std::string(cur_.text) + "'");
    }
  }

  // Parses q<k>/p<k>; returns nullopt if `name` is not of that shape.
  std::optional<std::size_t> indexed_variable(std::string_view name) const {
    if (name.size() < 2 || (name[0] != 'q' && name[0] != 'p')) return std::nullopt;
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
    if (ec != std::errc() || ptr != name.data() + name.size()) return std::nullopt;
    if (k < 1 || k > n_) throw IndexOutOfRange(std::string(name), static_cast<int>(n_));
    return name[0] == 'q' ? q_index(n_, k - 1) : p_index(n_, k - 1);
  }

  NodePtr identifier() {
    const Token tok = cur_;
    const std::string name(tok.text);
    advance();
    const bool call = cur_.kind == Tok::lparen;

    if (auto f = function_named(name)) {
      if (!call) throw SyntaxError(cur_.pos, "function '" + name + "' requires '('");
      advance();
      NodePtr arg = expr();
      expect(Tok::rparen, "')'");
      auto node = std::make_shared<Node>();
      node->kind = NodeKind::call;
      node->function = *f;
      node->children = {arg};
      return node;
    }

    NodePtr leaf;
    if (name == "t") {
      auto node = std::make_shared<Node>();
      node->kind = NodeKind::variable;
      node->variable = t_index();
      leaf = node;
    } else if (auto idx = indexed_variable(name)) {
      auto node = std::make_shared<Node>();
      node->kind = NodeKind::variable;
      node->variable = *idx;
      leaf = node;
    } else if (name == "pi") {
      leaf = make_leaf(NodeKind::pi);
    } else if (params_.count(name) != 0) {
      auto node = std::make_shared<Node>();
      node->kind = NodeKind::parameter;
      node->name = name;
      leaf = node;
    } else {
      throw UnknownIdentifier(name);
    }
    if (call) throw SyntaxError(cur_.pos, "'" + name + "' is not a function");
    return leaf;
  }

  Lexer lexer_;
  Token cur_{Tok::end, 0, {}};
  std::size_t n_;
  const std::set<std::string, std::less<>>& params_;
};

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string variable_name(std::size_t index, std::size_t n) {
  if (index == 0) return "t";
  if (index <= n) return "q" + std::to_string(index);
  return "p" + std::to_string(index - n);
}

void print(const Node& node, std::size_t n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*node.children[0], n, out);
    out += op;
    print(*node.children[1], n, out);
    out += ')';
  };
  switch (node.kind) {
    case NodeKind::number: out += format_number(node.number); break;
    case NodeKind::pi: out += "pi"; break;
    case NodeKind::variable: out += variable_name(node.variable, n); break;
    case NodeKind::parameter: out += node.name; break;
    case NodeKind::negate:
      out += "(-";
      print(*node.children[0], n, out);
      out += ')';
      break;
    case NodeKind::add: binary("+"); break;
    case NodeKind::sub: binary("-"); break;
    case NodeKind::mul: binary("*"); break;
    case NodeKind::div: binary("/"); break;
    case NodeKind::pow: binary("^"); break;
    case NodeKind::call:
      out += function_name(node.function);
      out += '(';
      print(*node.children[0], n, out);
      out += ')';
      break;
  }
}

void collect_parameters(const Node& node, std::set<std::string>& out) {
  if (node.kind == NodeKind::parameter) out.insert(node.name);
  for (const auto& child : node.children) collect_parameters(*child, out);
}

}  // namespace

Expression Expression::parse(std::string_view text, std::size_t n,
                             const std::set<std::string, std::less<>>& param_names) {
  if (n == 0) throw DimensionMismatch("dimension n must be positive");
  Parser parser(text, n, param_names);
  Expression e(parser.parse(), n);
  e.source_ = std::string(text);
  return e;
}

Expression Expression::constant(double value, std::size_t n) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::number;
  node->number = value;
  return Expression(node, n);
}

std::string Expression::str() const {
  std::string out;
  if (root_) print(*root_, n_, out);
  return out;
}

std::set<std::string> Expression::parameters() const {
  std::set<std::string> out;
  if (root_) collect_parameters(*root_, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::number:
      if (!(a.number == b.number)) return false;
      break;
    case NodeKind::variable:
      if (a.variable != b.variable) return false;
      break;
    case NodeKind::parameter:
      if (a.name != b.name) return false;
      break;
    case NodeKind::call:
      if (a.function != b.function) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.n_ != b.n_) return false;
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return structurally_equal(*a.root_, *b.root_);
}

std::string to_string(const Node& node, std::size_t n) {
  std::string out;
  print(node, n, out);
  return out;
}

Expression parse_expression(std::string_view text, std::size_t n,
                            const std::set<std::string, std::less<>>& param_names) {
  return Expression::parse(text, n, param_names);
}

}  // namespace noether
