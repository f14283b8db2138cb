#include "slantcheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace slantcheck {

namespace {

enum class Func { Sin, Cos, Sqrt, Abs, Sec, Arccos };

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Sec: return "sec";
    case Func::Arccos: return "arccos";
  }
  return "?";
}

}  // namespace

struct Expr::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  double number = 0.0;
  std::size_t var = 0;
  long exponent = 0;
  Func func = Func::Sin;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
 public:
  Parser(const std::string& text, std::size_t vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != text_.size())
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                           "' at offset " + std::to_string(pos_),
                       pos_);
    return e;
  }

 private:
  const std::string& text_;
  std::size_t vars_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(
                                      static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(pos_), pos_);
  }

  NodePtr expression() {
    NodePtr left = term();
    while (true) {
      skip_space();
      if (eat('+')) {
        Node n;
        n.kind = Node::Kind::Add;
        n.a = left;
        n.b = term();
        left = make(std::move(n));
      } else if (eat('-')) {
        Node n;
        n.kind = Node::Kind::Sub;
        n.a = left;
        n.b = term();
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    while (true) {
      skip_space();
      if (eat('*')) {
        Node n;
        n.kind = Node::Kind::Mul;
        n.a = left;
        n.b = unary();
        left = make(std::move(n));
      } else if (eat('/')) {
        Node n;
        n.kind = Node::Kind::Div;
        n.a = left;
        n.b = unary();
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    skip_space();
    if (eat('-')) {
      Node n;
      n.kind = Node::Kind::Neg;
      n.a = unary();
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    skip_space();
    if (!eat('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected an integer exponent after '^'");
    long e = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      e = e * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^')
      fail("chained '^' needs parentheses");
    (void)start;
    Node n;
    n.kind = Node::Kind::Pow;
    n.exponent = e;
    n.a = base;
    return make(std::move(n));
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return symbol();
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      skip_space();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail("expected a number, a parameter, a function, or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    const std::string tok = text_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0') {
      pos_ = start;
      fail("malformed number '" + tok + "'");
    }
    Node n;
    n.kind = Node::Kind::Number;
    n.number = v;
    return make(std::move(n));
  }

  NodePtr symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);

    struct {
      const char* name;
      Func f;
    } static const kFuncs[] = {{"sin", Func::Sin},   {"cos", Func::Cos},
                               {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
                               {"sec", Func::Sec},   {"arccos", Func::Arccos}};
    for (const auto& e : kFuncs)
      if (name == e.name) {
        skip_space();
        if (!eat('(')) {
          pos_ = start;
          fail("function '" + name + "' needs parentheses");
        }
        Node n;
        n.kind = Node::Kind::Call;
        n.func = e.f;
        n.a = expression();
        skip_space();
        if (!eat(')')) fail("expected ')'");
        return make(std::move(n));
      }

    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
        if (idx >= 1 && static_cast<std::size_t>(idx) <= vars_) {
          Node n;
          n.kind = Node::Kind::Var;
          n.var = static_cast<std::size_t>(idx) - 1;
          return make(std::move(n));
        }
      }
    }
    pos_ = start;
    fail("unknown symbol '" + name + "'; valid parameters are x1..x" +
         std::to_string(vars_) +
         " and functions sin, cos, sqrt, abs, sec, arccos");
  }
};

int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Add:
    case Node::Kind::Sub: return 1;
    case Node::Kind::Mul:
    case Node::Kind::Div: return 2;
    case Node::Kind::Neg: return 3;
    case Node::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_node(const Node& n, int parent_prec, std::string& out) {
  const int prec = precedence(n);
  const bool wrap = prec < parent_prec;
  if (wrap) out += '(';
  switch (n.kind) {
    case Node::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      break;
    }
    case Node::Kind::Var:
      out += "x" + std::to_string(n.var + 1);
      break;
    case Node::Kind::Neg:
      out += '-';
      print_node(*n.a, prec + 1, out);
      break;
    case Node::Kind::Add:
      print_node(*n.a, prec, out);
      out += " + ";
      print_node(*n.b, prec + 1, out);
      break;
    case Node::Kind::Sub:
      print_node(*n.a, prec, out);
      out += " - ";
      print_node(*n.b, prec + 1, out);
      break;
    case Node::Kind::Mul:
      print_node(*n.a, prec, out);
      out += "*";
      print_node(*n.b, prec + 1, out);
      break;
    case Node::Kind::Div:
      print_node(*n.a, prec, out);
      out += "/";
      print_node(*n.b, prec + 1, out);
      break;
    case Node::Kind::Pow:
      print_node(*n.a, prec + 1, out);
      out += "^" + std::to_string(n.exponent);
      break;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, 0, out);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

template <class S>
S eval_node(const Node& n, const std::vector<S>& vars) {
  using std::sin;
  using std::cos;
  using std::sqrt;
  using std::abs;
  switch (n.kind) {
    case Node::Kind::Number: return S(n.number);
    case Node::Kind::Var: return vars[n.var];
    case Node::Kind::Neg: return -eval_node(*n.a, vars);
    case Node::Kind::Add: return eval_node(*n.a, vars) + eval_node(*n.b, vars);
    case Node::Kind::Sub: return eval_node(*n.a, vars) - eval_node(*n.b, vars);
    case Node::Kind::Mul: return eval_node(*n.a, vars) * eval_node(*n.b, vars);
    case Node::Kind::Div: return eval_node(*n.a, vars) / eval_node(*n.b, vars);
    case Node::Kind::Pow: return pow_int(eval_node(*n.a, vars), n.exponent);
    case Node::Kind::Call: {
      const S x = eval_node(*n.a, vars);
      switch (n.func) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Sqrt: return sqrt(x);
        case Func::Abs: return abs(x);
        case Func::Sec: return sec(x);
        case Func::Arccos: return arccos(x);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expr Expr::parse(const std::string& text, std::size_t var_count) {
  Parser p(text, var_count);
  Expr e;
  e.root_ = p.run();
  e.vars_ = var_count;
  return e;
}

std::string Expr::to_string() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, 0, out);
  return out;
}

double Expr::eval(const Vec& vars) const {
  if (vars.size() < vars_)
    throw DimensionError("expression evaluated with too few variables");
  return eval_node<double>(*root_, vars);
}

Jet2 Expr::eval(const JetVec& vars) const {
  if (vars.size() < vars_)
    throw DimensionError("expression evaluated with too few variables");
  return eval_node<Jet2>(*root_, vars);
}

}  // namespace slantcheck
