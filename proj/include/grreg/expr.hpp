#pragma once

#include <memory>
#include <string>
#include <vector>

#include "grreg/linalg.hpp"

namespace grreg {

// Closed-form expressions in one complex variable:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' int)?
//   atom   := number | 'i' | var | func '(' expr ')' | '(' expr ')'
//   var    := 'x' | 'z' | 'w'
//   func   := exp | sin | cos | sqrt | conj | abs
//
// The three variable names are interchangeable spellings of the single
// argument; the name is kept only so printing reproduces the input.
class Expr {
public:
  enum class Op { Num, Imag, Var, Add, Sub, Mul, Div, Neg, Pow, Func };
  enum class Fn { Exp, Sin, Cos, Sqrt, Conj, Abs };

  struct Node {
    Op op;
    double num = 0.0;
    int exponent = 0;
    Fn fn = Fn::Exp;
    char var = 'x';
    std::shared_ptr<const Node> lhs, rhs;
  };

  Expr() : Expr(number(0.0)) {}
  static Expr parse(const std::string& text);
  static Expr number(double v);
  static Expr imag();
  static Expr var(char name = 'x');
  static Expr func(Fn f, const Expr& arg);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr pow(int n) const;

  cd eval(cd v) const;
  cd operator()(cd v) const { return eval(v); }
  cd operator()(double v) const { return eval(cd(v, 0.0)); }

  std::string str() const;
  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }

  // Coefficients c_0..c_d of a polynomial expression in the variable;
  // throws InvalidInput for anything that is not a polynomial.
  std::vector<cd> polynomial() const;

  const Node& node() const { return *root_; }

private:
  explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const Node> root_;
};

const char* fn_name(Expr::Fn f);

}  // namespace grreg
