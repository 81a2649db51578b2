#pragma once

#include <memory>
#include <span>
#include <string>

namespace rearr {

/// Arithmetic expression in the coordinates of a cell centre.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
/// the constant pi, variables x (first coordinate) and x1..xn, and the
/// functions abs, min, max, exp, log, sqrt, sin, cos, step (1 for s > 0,
/// else 0) and dist(x, c1, ..., cn) (distance from the point to c).
/// Parse errors raise PreconditionError with the offending position.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(std::span<const double> x) const;
  const std::string& text() const { return text_; }
  /// Largest coordinate index referenced, 0-based; -1 when none.
  int max_coordinate() const { return max_coordinate_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_coordinate_ = -1;
};

}  // namespace rearr
