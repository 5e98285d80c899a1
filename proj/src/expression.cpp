#include "rcis/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace rcis {
namespace expr {
namespace {

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, comma, end };
  Kind kind;
  double number = 0.0;
  std::string text;
  char op = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::end;
      return;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      tok_.number = std::strtod(begin, &end);
      if (end == begin) throw ParseError("malformed number", line_, col_);
      const std::size_t len = static_cast<std::size_t>(end - begin);
      pos_ += len;
      col_ += static_cast<int>(len);
      tok_.kind = Token::Kind::number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = pos_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) ||
                               s_[j] == '_'))
        ++j;
      tok_.kind = Token::Kind::ident;
      tok_.text = s_.substr(pos_, j - pos_);
      col_ += static_cast<int>(j - pos_);
      pos_ = j;
      return;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        tok_.kind = Token::Kind::op;
        tok_.op = c;
        break;
      case '(':
        tok_.kind = Token::Kind::lparen;
        break;
      case ')':
        tok_.kind = Token::Kind::rparen;
        break;
      case ',':
        tok_.kind = Token::Kind::comma;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         col_);
    }
    ++pos_;
    ++col_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

const std::map<std::string, std::pair<Func, int>>& function_table() {
  static const std::map<std::string, std::pair<Func, int>> table = {
      {"sin", {Func::sin, 1}},  {"cos", {Func::cos, 1}},
      {"exp", {Func::exp, 1}},  {"tanh", {Func::tanh, 1}},
      {"abs", {Func::abs, 1}},  {"sqrt", {Func::sqrt, 1}},
      {"min", {Func::min, 2}},  {"max", {Func::max, 2}},
  };
  return table;
}

class Parser {
public:
  Parser(const std::string& text, int n, int m, int q)
      : lex_(text), n_(n), m_(m), q_(q) {}

  NodePtr parse_all() {
    NodePtr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::end)
      throw ParseError("unexpected trailing input", t.line, t.col);
    return e;
  }

private:
  NodePtr make(Node::Kind kind, std::vector<NodePtr> args, const Token& at) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->args = std::move(args);
    node->line = at.line;
    node->col = at.col;
    return node;
  }

  NodePtr parse_sum() {
    NodePtr left = parse_product();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      Token t = lex_.take();
      NodePtr right = parse_product();
      left = make(t.op == '+' ? Node::Kind::add : Node::Kind::sub,
                  {left, right}, t);
    }
    return left;
  }

  NodePtr parse_product() {
    NodePtr left = parse_unary();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      Token t = lex_.take();
      NodePtr right = parse_unary();
      left = make(t.op == '*' ? Node::Kind::mul : Node::Kind::div,
                  {left, right}, t);
    }
    return left;
  }

  NodePtr parse_unary() {
    if (lex_.peek().kind == Token::Kind::op && lex_.peek().op == '-') {
      Token t = lex_.take();
      return make(Node::Kind::negate, {parse_unary()}, t);
    }
    if (lex_.peek().kind == Token::Kind::op && lex_.peek().op == '+') {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (lex_.peek().kind == Token::Kind::op && lex_.peek().op == '^') {
      Token t = lex_.take();
      /* right-associative; exponent may carry a sign */
      NodePtr exponent = parse_unary();
      return make(Node::Kind::pow, {base, exponent}, t);
    }
    return base;
  }

  NodePtr parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::number: {
        auto node = std::make_shared<Node>();
        node->kind = Node::Kind::constant;
        node->value = t.number;
        node->line = t.line;
        node->col = t.col;
        return node;
      }
      case Token::Kind::lparen: {
        NodePtr e = parse_sum();
        expect_rparen(t);
        return e;
      }
      case Token::Kind::ident:
        return parse_ident(t);
      default:
        throw ParseError("expected a number, variable or '('", t.line, t.col);
    }
  }

  void expect_rparen(const Token& open) {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::rparen)
      throw ParseError("missing ')' for '(' ", open.line, open.col);
    lex_.take();
  }

  NodePtr parse_ident(const Token& t) {
    if (auto it = function_table().find(t.text); it != function_table().end()) {
      const auto [func, arity] = it->second;
      if (lex_.peek().kind != Token::Kind::lparen)
        throw ParseError("function '" + t.text + "' needs an argument list",
                         t.line, t.col);
      Token open = lex_.take();
      std::vector<NodePtr> args;
      args.push_back(parse_sum());
      while (lex_.peek().kind == Token::Kind::comma) {
        lex_.take();
        args.push_back(parse_sum());
      }
      expect_rparen(open);
      if (static_cast<int>(args.size()) != arity)
        throw ParseError("function '" + t.text + "' takes " +
                             std::to_string(arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         t.line, t.col);
      auto node = make(Node::Kind::call, std::move(args), t);
      const_cast<Node&>(*node).func = func;
      return node;
    }
    return parse_variable(t);
  }

  NodePtr parse_variable(const Token& t) {
    VarKind kind;
    int limit;
    switch (t.text[0]) {
      case 'x': kind = VarKind::state; limit = n_; break;
      case 'u': kind = VarKind::input; limit = m_; break;
      case 'w': kind = VarKind::disturbance; limit = q_; break;
      default:
        throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
    }
    if (t.text.size() < 2)
      throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
    int index = 0;
    for (std::size_t i = 1; i < t.text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
        throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
      index = index * 10 + (t.text[i] - '0');
    }
    if (index < 1 || index > limit)
      throw ParseError("variable '" + t.text + "' is out of range (declared " +
                           "dimension " + std::to_string(limit) + ")",
                       t.line, t.col);
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::variable;
    node->var_kind = kind;
    node->var_index = index - 1;
    node->line = t.line;
    node->col = t.col;
    return node;
  }

  Lexer lex_;
  int n_, m_, q_;
};

template <class T>
T apply_func(Func f, const T& a) {
  using std::sin; using std::cos; using std::exp;
  using std::tanh; using std::abs; using std::sqrt;
  switch (f) {
    case Func::sin: return sin(a);
    case Func::cos: return cos(a);
    case Func::exp: return exp(a);
    case Func::tanh: return tanh(a);
    case Func::abs: return abs(a);
    case Func::sqrt: return sqrt(a);
    default: throw EvalError("bad unary function");
  }
}

}  // namespace

NodePtr parse(const std::string& text, int state_dim, int input_dim,
              int disturbance_dim) {
  return Parser(text, state_dim, input_dim, disturbance_dim).parse_all();
}

double eval_point(const Node& node, std::span<const double> x,
                  std::span<const double> u, std::span<const double> w) {
  switch (node.kind) {
    case Node::Kind::constant:
      return node.value;
    case Node::Kind::variable: {
      const auto i = static_cast<std::size_t>(node.var_index);
      switch (node.var_kind) {
        case VarKind::state: return x[i];
        case VarKind::input: return u[i];
        case VarKind::disturbance: return w[i];
      }
      break;
    }
    case Node::Kind::negate:
      return -eval_point(*node.args[0], x, u, w);
    case Node::Kind::add:
      return eval_point(*node.args[0], x, u, w) + eval_point(*node.args[1], x, u, w);
    case Node::Kind::sub:
      return eval_point(*node.args[0], x, u, w) - eval_point(*node.args[1], x, u, w);
    case Node::Kind::mul:
      return eval_point(*node.args[0], x, u, w) * eval_point(*node.args[1], x, u, w);
    case Node::Kind::div: {
      const double den = eval_point(*node.args[1], x, u, w);
      if (den == 0.0)
        throw EvalError("division by zero at line " + std::to_string(node.line) +
                        ", column " + std::to_string(node.col));
      return eval_point(*node.args[0], x, u, w) / den;
    }
    case Node::Kind::pow:
      return std::pow(eval_point(*node.args[0], x, u, w),
                      eval_point(*node.args[1], x, u, w));
    case Node::Kind::call:
      if (node.args.size() == 2) {
        const double a = eval_point(*node.args[0], x, u, w);
        const double b = eval_point(*node.args[1], x, u, w);
        return node.func == Func::min ? std::min(a, b) : std::max(a, b);
      }
      return apply_func(node.func, eval_point(*node.args[0], x, u, w));
  }
  throw EvalError("bad expression node");
}

Interval eval_interval(const Node& node, std::span<const Interval> x,
                       std::span<const Interval> u,
                       std::span<const Interval> w) {
  switch (node.kind) {
    case Node::Kind::constant:
      return Interval(node.value);
    case Node::Kind::variable: {
      const auto i = static_cast<std::size_t>(node.var_index);
      switch (node.var_kind) {
        case VarKind::state: return x[i];
        case VarKind::input: return u[i];
        case VarKind::disturbance: return w[i];
      }
      break;
    }
    case Node::Kind::negate:
      return -eval_interval(*node.args[0], x, u, w);
    case Node::Kind::add:
      return eval_interval(*node.args[0], x, u, w) +
             eval_interval(*node.args[1], x, u, w);
    case Node::Kind::sub:
      return eval_interval(*node.args[0], x, u, w) -
             eval_interval(*node.args[1], x, u, w);
    case Node::Kind::mul:
      return eval_interval(*node.args[0], x, u, w) *
             eval_interval(*node.args[1], x, u, w);
    case Node::Kind::div:
      try {
        return eval_interval(*node.args[0], x, u, w) /
               eval_interval(*node.args[1], x, u, w);
      } catch (const std::domain_error& e) {
        throw EvalError(std::string(e.what()) + " at line " +
                        std::to_string(node.line) + ", column " +
                        std::to_string(node.col));
      }
    case Node::Kind::pow:
      try {
        return pow(eval_interval(*node.args[0], x, u, w),
                   eval_interval(*node.args[1], x, u, w));
      } catch (const std::domain_error& e) {
        throw EvalError(std::string(e.what()) + " at line " +
                        std::to_string(node.line) + ", column " +
                        std::to_string(node.col));
      }
    case Node::Kind::call:
      if (node.args.size() == 2) {
        const Interval a = eval_interval(*node.args[0], x, u, w);
        const Interval b = eval_interval(*node.args[1], x, u, w);
        return node.func == Func::min ? min(a, b) : max(a, b);
      }
      try {
        return apply_func(node.func, eval_interval(*node.args[0], x, u, w));
      } catch (const std::domain_error& e) {
        throw EvalError(std::string(e.what()) + " at line " +
                        std::to_string(node.line) + ", column " +
                        std::to_string(node.col));
      }
  }
  throw EvalError("bad expression node");
}

}  // namespace expr

ExpressionField::ExpressionField(const std::vector<std::string>& expressions,
                                 int state_dim, int input_dim,
                                 int disturbance_dim)
    : n_(state_dim), m_(input_dim), q_(disturbance_dim), texts_(expressions) {
  if (state_dim < 1)
    throw std::invalid_argument("ExpressionField: state_dim must be >= 1");
  if (input_dim < 0 || disturbance_dim < 0)
    throw std::invalid_argument("ExpressionField: negative dimension");
  if (static_cast<int>(expressions.size()) != state_dim)
    throw std::invalid_argument(
        "ExpressionField: need exactly one expression per state coordinate");
  roots_.reserve(expressions.size());
  for (const std::string& text : expressions)
    roots_.push_back(expr::parse(text, n_, m_, q_));
}

std::vector<double> ExpressionField::eval(std::span<const double> x,
                                          std::span<const double> u,
                                          std::span<const double> w) const {
  std::vector<double> out(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i)
    out[i] = expr::eval_point(*roots_[i], x, u, w);
  return out;
}

Box ExpressionField::eval_interval(const Box& xbox, const Box& ubox,
                                   std::span<const double> w) const {
  if (xbox.dim() != n_ || ubox.dim() != m_ ||
      static_cast<int>(w.size()) != q_)
    throw std::invalid_argument("ExpressionField::eval_interval: bad dimensions");
  std::vector<Interval> xi, ui, wi;
  for (int i = 0; i < n_; ++i) xi.emplace_back(xbox.lo(i), xbox.hi(i));
  for (int i = 0; i < m_; ++i) ui.emplace_back(ubox.lo(i), ubox.hi(i));
  for (int i = 0; i < q_; ++i) wi.emplace_back(w[static_cast<std::size_t>(i)]);
  std::vector<double> lo(roots_.size()), hi(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const Interval r = expr::eval_interval(*roots_[i], xi, ui, wi);
    lo[i] = r.lo;
    hi[i] = r.hi;
  }
  return Box(std::move(lo), std::move(hi));
}

}  // namespace rcis
