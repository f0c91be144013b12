#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "grreg/config.hpp"
#include "grreg/expr.hpp"
#include "grreg/module.hpp"

namespace grreg {

// 2x2 matrices of closed-form symbols on the real line, entries row-major.
struct SymbolMatrix2 {
  std::array<Expr, 4> e;

  static SymbolMatrix2 identity();
  static SymbolMatrix2 parse(const std::array<std::string, 4>& text);

  Expr& operator()(int r, int c) { return e[2 * r + c]; }
  const Expr& operator()(int r, int c) const { return e[2 * r + c]; }
  Eigen::Matrix2cd eval(double x) const;

  SymbolMatrix2 adjoint() const;
  SymbolMatrix2 inverse() const;  // adjugate over determinant
  friend SymbolMatrix2 operator+(const SymbolMatrix2& a, const SymbolMatrix2& b);
  friend SymbolMatrix2 operator*(const SymbolMatrix2& a, const SymbolMatrix2& b);
};

// Class of a single entry, judged on samples: vanishing beyond window_R,
// converging at both ends to one constant, or bounded by bounded_cap.
struct EntryCheck {
  bool finite = true;
  double sup = 0.0;        // sup |e| over all samples
  double tail = 0.0;       // sup |e| beyond the window
  double tail_spread = 0.0;  // sup |e - e(far)| beyond the window
};
EntryCheck check_entry(const Expr& e, const Config& cfg);
bool in_class(const EntryCheck& c, SymbolClass cls, const Config& cfg);

// The algebra A = (C0 C0; C0 C0~) and its multipliers
//   M(A)  = (Cb C0; C0 C0~)
//   LM(A) = (Cb C0; Cb C0~).
std::array<SymbolClass, 4> pattern_A();
std::array<SymbolClass, 4> pattern_M();
std::array<SymbolClass, 4> pattern_LM();

struct MultiplierVerdict {
  bool in_A = false, in_M = false, in_LM = false;
  std::vector<std::string> failures;  // "entry (r,c) not in C0" for the first failing pattern
  nlohmann::json to_json() const;
};
MultiplierVerdict multiplier_membership(const SymbolMatrix2& m, const Config& cfg);

struct MatrixSymbolOp {
  SymbolMatrix2 t;
  SymbolMatrix2 a, a_star, b;  // pointwise (1+t*t)^-1, (1+tt*)^-1, t(1+t*t)^-1
  MultiplierVerdict t_verdict, a_verdict, a_star_verdict, b_verdict;
  nlohmann::json to_json() const;
};

// Builds the pointwise triple of a 2x2 symbol operator and checks each entry
// against its declared class; throws ClassCheckFailed naming the entry.
MatrixSymbolOp matrix_symbol_op(const SymbolMatrix2& t, const std::array<SymbolClass, 4>& declared,
                                const Config& cfg);

// Finite model of A over two regular points and the point at infinity: the
// fibres at the finite points are full M2, the fibre at infinity keeps only
// the entries that may be nonzero there (E22 for A, nothing for A0).
struct GridModel {
  ModuleSpec ambient;  // M2 at every point
  ModuleSpec A;        // E22 only at infinity
  Submodule A0;        // zero at infinity, as a submodule of A
  Eigen::MatrixXi mask_A, mask_M, mask_LM;  // 2x2 fibre patterns at infinity
};
GridModel grid_model();

// Block-diagonal operator from its fibres at (0, 1, infinity).
Mat grid_operator(const Eigen::Matrix2cd& at0, const Eigen::Matrix2cd& at1, const Eigen::Matrix2cd& at_inf);

// The operator on A: graph in the ambient model intersected with A (+) A.
GraphOperator grid_restricted(const GridModel& g, const Mat& T);
// Adjoint taken in the ambient model and then restricted to A.
GraphOperator grid_adjoint(const GridModel& g, const Mat& T, const Config& cfg);
// Fibre of a dense grid operator at infinity, checked against a pattern.
bool fibre_in_pattern(const Mat& T, const Eigen::MatrixXi& mask, double tol = 1e-12);

}  // namespace grreg
