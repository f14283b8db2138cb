#pragma once

#include <memory>
#include <string>
#include <vector>

#include "slantcheck/jet.hpp"
#include "slantcheck/linalg.hpp"

namespace slantcheck {

// Arithmetic expression over variables x1..xN.  Supports + - * /, unary
// minus, ^ with an integer exponent (binding tighter than unary minus),
// parentheses, and the functions sin, cos, sqrt, abs, sec, arccos.
// Numeric literals may be integer, decimal, or scientific.
class Expr {
 public:
  Expr() = default;

  // ParseError carries the byte offset of the first offending character.
  static Expr parse(const std::string& text, std::size_t var_count);

  // Canonical form; reparsing it yields the same canonical form.
  std::string to_string() const;

  double eval(const Vec& vars) const;
  Jet2 eval(const JetVec& vars) const;

  std::size_t var_count() const { return vars_; }
  bool valid() const { return root_ != nullptr; }

  struct Node;  // implementation detail, defined with the parser

 private:
  std::shared_ptr<const Node> root_;
  std::size_t vars_ = 0;
};

}  // namespace slantcheck
