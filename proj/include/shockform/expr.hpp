#pragma once

// Tiny symbolic expression engine used to define custom problems in config
// files: numbers, named variables, + - * / ^, unary minus, and the functions
// sin, cos, exp, log, sqrt. Derivatives are symbolic.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "shockform/problem.hpp"

namespace shockform {

class Expr {
 public:
  struct Node;

  Expr() = default;

  /// Throws ExpressionInvalid on syntax errors or unknown identifiers.
  static Expr parse(std::string_view text, const std::vector<std::string>& variables);
  static Expr number(double v);
  static Expr variable(std::string name);

  double eval(const std::map<std::string, double, std::less<>>& env) const;
  Expr derivative(std::string_view var) const;
  bool is_constant(double* value = nullptr) const;
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  static Expr apply(std::string_view fn, const Expr& arg);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Problem definition whose jets come from symbolic derivatives of the
/// given expressions: F(u), G(u) and u0(x, y).
ProblemDefinition expression_problem(std::string_view flux_x, std::string_view flux_y,
                                     std::string_view initial, Box box);

}  // namespace shockform
