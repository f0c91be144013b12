#include "grreg/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "grreg/error.hpp"

namespace grreg {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

const char* fn_name(Expr::Fn f) {
  switch (f) {
    case Expr::Fn::Exp: return "exp";
    case Expr::Fn::Sin: return "sin";
    case Expr::Fn::Cos: return "cos";
    case Expr::Fn::Sqrt: return "sqrt";
    case Expr::Fn::Conj: return "conj";
    case Expr::Fn::Abs: return "abs";
  }
  return "?";
}

namespace {

NodePtr make(Expr::Op op) {
  auto n = std::make_shared<Node>();
  n->op = op;
  return n;
}

NodePtr binary(Expr::Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = binary(Expr::Op::Add, lhs, term());
      else if (eat('-')) lhs = binary(Expr::Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (eat('*')) lhs = binary(Expr::Op::Mul, lhs, factor());
      else if (eat('/')) lhs = binary(Expr::Op::Div, lhs, factor());
      else return lhs;
    }
  }

  NodePtr factor() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->op = Expr::Op::Neg;
      n->lhs = factor();
      return n;
    }
    NodePtr base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        neg = s_[pos_] == '-';
        ++pos_;
      }
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw SyntaxError(start, "integer exponent expected");
      long v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + (s_[pos_] - '0');
        if (v > 1000) throw SyntaxError(start, "exponent too large");
        ++pos_;
      }
      auto n = std::make_shared<Node>();
      n->op = Expr::Op::Pow;
      n->exponent = neg ? -int(v) : int(v);
      n->lhs = base;
      return n;
    }
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) throw SyntaxError(pos_, "')' expected");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "i") return make(Expr::Op::Imag);
      if (id == "x" || id == "z" || id == "w") {
        auto n = std::make_shared<Node>();
        n->op = Expr::Op::Var;
        n->var = id[0];
        return n;
      }
      static const std::pair<const char*, Expr::Fn> fns[] = {
          {"exp", Expr::Fn::Exp},   {"sin", Expr::Fn::Sin},   {"cos", Expr::Fn::Cos},
          {"sqrt", Expr::Fn::Sqrt}, {"conj", Expr::Fn::Conj}, {"abs", Expr::Fn::Abs}};
      for (const auto& [name, fn] : fns) {
        if (id == name) {
          if (!eat('(')) throw SyntaxError(pos_, "'(' expected after " + id);
          auto n = std::make_shared<Node>();
          n->op = Expr::Op::Func;
          n->fn = fn;
          n->lhs = expr();
          if (!eat(')')) throw SyntaxError(pos_, "')' expected");
          return n;
        }
      }
      throw SyntaxError(start, "unknown identifier '" + id + "'");
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    // exponent part only when followed by a digit, so "2e" is not eaten
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    std::string tok = s_.substr(start, pos_ - start);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw SyntaxError(start, "malformed number '" + tok + "'");
    auto n = std::make_shared<Node>();
    n->op = Expr::Op::Num;
    n->num = v;
    return n;
  }
};

int precedence(const Node& n) {
  switch (n.op) {
    case Expr::Op::Add:
    case Expr::Op::Sub: return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 2;
    case Expr::Op::Neg: return 3;
    case Expr::Op::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void print(const Node& n, std::string& out);

void print_child(const Node& c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print(c, out);
    out += ')';
  } else {
    print(c, out);
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Expr::Op::Num: out += format_number(n.num); break;
    case Expr::Op::Imag: out += 'i'; break;
    case Expr::Op::Var: out += n.var; break;
    case Expr::Op::Add:
    case Expr::Op::Sub:
    case Expr::Op::Mul:
    case Expr::Op::Div: {
      int p = precedence(n);
      print_child(*n.lhs, p, out);
      out += n.op == Expr::Op::Add ? '+' : n.op == Expr::Op::Sub ? '-' : n.op == Expr::Op::Mul ? '*' : '/';
      print_child(*n.rhs, p + 1, out);
      break;
    }
    case Expr::Op::Neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      break;
    case Expr::Op::Pow:
      print_child(*n.lhs, 5, out);
      out += '^';
      out += std::to_string(n.exponent);
      break;
    case Expr::Op::Func:
      out += fn_name(n.fn);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

cd ipow(cd b, int e) {
  if (e < 0) return cd(1.0) / ipow(b, -e);
  cd r(1.0);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// std::complex division loses the sign of infinities in ways we do not
// care about; singular points are never evaluated exactly.
cd eval(const Node& n, cd v) {
  switch (n.op) {
    case Expr::Op::Num: return cd(n.num, 0.0);
    case Expr::Op::Imag: return cd(0.0, 1.0);
    case Expr::Op::Var: return v;
    case Expr::Op::Add: return eval(*n.lhs, v) + eval(*n.rhs, v);
    case Expr::Op::Sub: return eval(*n.lhs, v) - eval(*n.rhs, v);
    case Expr::Op::Mul: return eval(*n.lhs, v) * eval(*n.rhs, v);
    case Expr::Op::Div: return eval(*n.lhs, v) / eval(*n.rhs, v);
    case Expr::Op::Neg: return -eval(*n.lhs, v);
    case Expr::Op::Pow: return ipow(eval(*n.lhs, v), n.exponent);
    case Expr::Op::Func: {
      cd a = eval(*n.lhs, v);
      switch (n.fn) {
        case Expr::Fn::Exp: return std::exp(a);
        case Expr::Fn::Sin: return std::sin(a);
        case Expr::Fn::Cos: return std::cos(a);
        case Expr::Fn::Sqrt: return std::sqrt(a);
        case Expr::Fn::Conj: return std::conj(a);
        case Expr::Fn::Abs: return cd(std::abs(a), 0.0);
      }
    }
  }
  return cd(std::nan(""), 0.0);
}

bool equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Expr::Op::Num: return a.num == b.num;
    case Expr::Op::Imag: return true;
    case Expr::Op::Var: return a.var == b.var;
    case Expr::Op::Neg: return equal(*a.lhs, *b.lhs);
    case Expr::Op::Pow: return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case Expr::Op::Func: return a.fn == b.fn && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

using Poly = std::vector<cd>;

Poly padd(const Poly& a, const Poly& b, double sb) {
  Poly r(std::max(a.size(), b.size()), cd(0.0));
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += sb * b[k];
  return r;
}

Poly pmul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, cd(0.0));
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k) r[j + k] += a[j] * b[k];
  return r;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == cd(0.0)) p.pop_back();
}

Poly to_poly(const Node& n) {
  switch (n.op) {
    case Expr::Op::Num: return {cd(n.num, 0.0)};
    case Expr::Op::Imag: return {cd(0.0, 1.0)};
    case Expr::Op::Var: return {cd(0.0), cd(1.0)};
    case Expr::Op::Add: return padd(to_poly(*n.lhs), to_poly(*n.rhs), 1.0);
    case Expr::Op::Sub: return padd(to_poly(*n.lhs), to_poly(*n.rhs), -1.0);
    case Expr::Op::Mul: return pmul(to_poly(*n.lhs), to_poly(*n.rhs));
    case Expr::Op::Neg: return padd({cd(0.0)}, to_poly(*n.lhs), -1.0);
    case Expr::Op::Div: {
      Poly d = to_poly(*n.rhs);
      trim(d);
      if (d.size() != 1 || d[0] == cd(0.0))
        throw Error(Errc::InvalidInput, "division by a non-constant in a polynomial");
      Poly r = to_poly(*n.lhs);
      for (auto& c : r) c /= d[0];
      return r;
    }
    case Expr::Op::Pow: {
      if (n.exponent < 0) throw Error(Errc::InvalidInput, "negative power in a polynomial");
      Poly b = to_poly(*n.lhs), r{cd(1.0)};
      for (int k = 0; k < n.exponent; ++k) r = pmul(r, b);
      return r;
    }
    case Expr::Op::Func: throw Error(Errc::InvalidInput, "function call in a polynomial");
  }
  return {};
}

}  // namespace

Expr Expr::parse(const std::string& text) { return Expr(Parser(text).run()); }

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Num;
  n->num = v;
  return Expr(n);
}

Expr Expr::imag() { return Expr(make(Op::Imag)); }

Expr Expr::var(char name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = name;
  return Expr(n);
}

Expr Expr::func(Fn f, const Expr& arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::Func;
  n->fn = f;
  n->lhs = arg.root_;
  return Expr(n);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(binary(Expr::Op::Add, a.root_, b.root_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(binary(Expr::Op::Sub, a.root_, b.root_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(binary(Expr::Op::Mul, a.root_, b.root_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(binary(Expr::Op::Div, a.root_, b.root_)); }

Expr operator-(const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = Expr::Op::Neg;
  n->lhs = a.root_;
  return Expr(n);
}

Expr Expr::pow(int e) const {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = e;
  n->lhs = root_;
  return Expr(n);
}

cd Expr::eval(cd v) const { return grreg::eval(*root_, v); }

std::string Expr::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expr::operator==(const Expr& o) const { return equal(*root_, *o.root_); }

std::vector<cd> Expr::polynomial() const {
  Poly p = to_poly(*root_);
  trim(p);
  return p;
}

}  // namespace grreg
