#include "orlicz/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace orlicz {

struct Expression::Node {
  enum class Kind { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  double value = 0.0;               // Number
  double (*fn)(double) = nullptr;   // Call
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Node::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return n;
}

NodePtr unary(Node::Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr call(double (*fn)(double), NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

  bool uses_y = false;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "expression error at position " << pos_ << ": " << what;
    throw std::invalid_argument(os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (eat('+'))
        left = binary(Node::Kind::Add, left, term());
      else if (eat('-'))
        left = binary(Node::Kind::Sub, left, term());
      else
        return left;
    }
  }

  NodePtr term() {
    NodePtr left = factor();
    for (;;) {
      if (eat('*'))
        left = binary(Node::Kind::Mul, left, factor());
      else if (eat('/'))
        left = binary(Node::Kind::Div, left, factor());
      else
        return left;
    }
  }

  NodePtr factor() {
    if (eat('-')) return unary(Node::Kind::Neg, factor());
    NodePtr base = primary();
    if (eat('^')) return binary(Node::Kind::Pow, base, factor());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected a value");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += std::size_t(end - begin);
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isalpha(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return leaf(Node::Kind::VarX);
      if (name == "y") {
        uses_y = true;
        return leaf(Node::Kind::VarY);
      }
      if (name == "pi") return number(3.14159265358979323846);
      double (*fn)(double) = nullptr;
      if (name == "sin")
        fn = [](double t) { return std::sin(t); };
      else if (name == "cos")
        fn = [](double t) { return std::cos(t); };
      else if (name == "exp")
        fn = [](double t) { return std::exp(t); };
      else if (name == "log")
        fn = [](double t) { return std::log(t); };
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!eat('(')) fail("expected '(' after '" + name + "'");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return call(fn, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double x, double y) {
  switch (n.kind) {
    case Node::Kind::Number: return n.value;
    case Node::Kind::VarX: return x;
    case Node::Kind::VarY: return y;
    case Node::Kind::Neg: return -eval_node(*n.a, x, y);
    case Node::Kind::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
    case Node::Kind::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
    case Node::Kind::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
    case Node::Kind::Div: return eval_node(*n.a, x, y) / eval_node(*n.b, x, y);
    case Node::Kind::Pow:
      return std::pow(eval_node(*n.a, x, y), eval_node(*n.b, x, y));
    case Node::Kind::Call: return n.fn(eval_node(*n.a, x, y));
  }
  return 0.0;  // unreachable
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.run();
  e.uses_y_ = p.uses_y;
  e.text_ = text;
  return e;
}

double Expression::eval(double x, double y) const {
  return eval_node(*root_, x, y);
}

}  // namespace orlicz
