/*
 * expression.hpp
 *
 * Arithmetic expression trees for user-defined vector fields. One
 * expression per state coordinate over the variables x1..xn, u1..um,
 * w1..wq with operators + - * / ^ and the functions sin, cos, exp,
 * tanh, abs, sqrt, min, max. The same tree evaluates in doubles and
 * in interval arithmetic (natural extension).
 */

#ifndef RCIS_EXPRESSION_HPP_
#define RCIS_EXPRESSION_HPP_

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcis/geometry.hpp"
#include "rcis/interval.hpp"

namespace rcis {

/* syntax error with 1-based position inside the offending expression */
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_, col_;
};

/* runtime evaluation failure (division by zero, domain errors, ...) */
class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace expr {

enum class VarKind { state, input, disturbance };

enum class Func { sin, cos, exp, tanh, abs, sqrt, min, max };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  Kind kind;
  double value = 0.0;                     // constant
  VarKind var_kind = VarKind::state;      // variable
  int var_index = 0;                      // 0-based
  Func func = Func::sin;                  // call
  std::vector<NodePtr> args;
  int line = 1, col = 1;
};

/* parse a single expression; dims bound the legal variable indices */
NodePtr parse(const std::string& text, int state_dim, int input_dim,
              int disturbance_dim);

double eval_point(const Node& node, std::span<const double> x,
                  std::span<const double> u, std::span<const double> w);

Interval eval_interval(const Node& node, std::span<const Interval> x,
                       std::span<const Interval> u, std::span<const Interval> w);

}  // namespace expr

/* A parsed vector field: one expression tree per state coordinate.
 * Immutable after construction; share freely across threads. */
class ExpressionField {
public:
  ExpressionField(const std::vector<std::string>& expressions, int state_dim,
                  int input_dim, int disturbance_dim);

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int disturbance_dim() const { return q_; }
  const std::vector<std::string>& texts() const { return texts_; }

  std::vector<double> eval(std::span<const double> x, std::span<const double> u,
                           std::span<const double> w) const;

  /* natural interval extension over a state box and input box at a
   * disturbance point; sound enclosure of the reachable values */
  Box eval_interval(const Box& xbox, const Box& ubox,
                    std::span<const double> w) const;

private:
  int n_, m_, q_;
  std::vector<std::string> texts_;
  std::vector<expr::NodePtr> roots_;
};

}  // namespace rcis

#endif  // RCIS_EXPRESSION_HPP_
