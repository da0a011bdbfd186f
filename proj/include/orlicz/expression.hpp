#pragma once

#include <memory>
#include <string>

namespace orlicz {

// Arithmetic over the spatial variables x and y: + - * / ^ (right
// associative), unary minus, parentheses, sin/cos/exp/log, and the constant
// pi. Parse errors carry the offending position.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double x, double y) const;
  bool uses_y() const { return uses_y_; }
  const std::string& text() const { return text_; }

  struct Node;  // opaque; defined with the parser

 private:
  Expression() = default;
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_y_ = false;
};

}  // namespace orlicz
