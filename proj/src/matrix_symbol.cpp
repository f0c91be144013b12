#include "grreg/matrix_symbol.hpp"

#include <cmath>

#include "grreg/error.hpp"
#include "grreg/symbol.hpp"

namespace grreg {

SymbolMatrix2 SymbolMatrix2::identity() {
  return {{Expr::number(1), Expr::number(0), Expr::number(0), Expr::number(1)}};
}

SymbolMatrix2 SymbolMatrix2::parse(const std::array<std::string, 4>& text) {
  SymbolMatrix2 m;
  for (int k = 0; k < 4; ++k) m.e[k] = Expr::parse(text[k]);
  return m;
}

Eigen::Matrix2cd SymbolMatrix2::eval(double x) const {
  Eigen::Matrix2cd v;
  v << e[0](x), e[1](x), e[2](x), e[3](x);
  return v;
}

SymbolMatrix2 SymbolMatrix2::adjoint() const {
  auto c = [](const Expr& z) { return Expr::func(Expr::Fn::Conj, z); };
  return {{c(e[0]), c(e[2]), c(e[1]), c(e[3])}};
}

SymbolMatrix2 SymbolMatrix2::inverse() const {
  Expr det = e[0] * e[3] - e[1] * e[2];
  return {{e[3] / det, -e[1] / det, -e[2] / det, e[0] / det}};
}

SymbolMatrix2 operator+(const SymbolMatrix2& a, const SymbolMatrix2& b) {
  SymbolMatrix2 s;
  for (int k = 0; k < 4; ++k) s.e[k] = a.e[k] + b.e[k];
  return s;
}

SymbolMatrix2 operator*(const SymbolMatrix2& a, const SymbolMatrix2& b) {
  SymbolMatrix2 p;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) p(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  return p;
}

EntryCheck check_entry(const Expr& e, const Config& cfg) {
  EntryCheck c;
  const double R = cfg.window_R;
  for (double x : sample_grid(DomainSpec::real_line(), cfg.grid_points, R)) {
    const double v = std::abs(e(x));
    if (!std::isfinite(v)) c.finite = false;
    c.sup = std::max(c.sup, v);
  }
  // dyadic lattice near the origin, so poles at simple points are not stepped over
  for (int k = -1024; k <= 1024; ++k) {
    const double v = std::abs(e(k / 64.0));
    if (!std::isfinite(v)) c.finite = false;
    c.sup = std::max(c.sup, v);
  }
  const cd far = e(10 * R);
  const int n = 200;
  for (int k = 0; k <= n; ++k) {
    const double x = R * std::pow(10.0, double(k) / n);
    for (double s : {x, -x}) {
      const cd v = e(s);
      if (!std::isfinite(std::abs(v))) c.finite = false;
      c.sup = std::max(c.sup, std::abs(v));
      c.tail = std::max(c.tail, std::abs(v));
      c.tail_spread = std::max(c.tail_spread, std::abs(v - far));
    }
  }
  return c;
}

bool in_class(const EntryCheck& c, SymbolClass cls, const Config& cfg) {
  if (!c.finite || c.sup > cfg.bounded_cap) return false;
  switch (cls) {
    case SymbolClass::Cb: return true;
    case SymbolClass::C0: return c.tail <= cfg.infinity_vanish;
    case SymbolClass::C0Unitized: return c.tail_spread <= cfg.infinity_vanish;
  }
  return false;
}

std::array<SymbolClass, 4> pattern_A() {
  using S = SymbolClass;
  return {S::C0, S::C0, S::C0, S::C0Unitized};
}
std::array<SymbolClass, 4> pattern_M() {
  using S = SymbolClass;
  return {S::Cb, S::C0, S::C0, S::C0Unitized};
}
std::array<SymbolClass, 4> pattern_LM() {
  using S = SymbolClass;
  return {S::Cb, S::C0, S::Cb, S::C0Unitized};
}

nlohmann::json MultiplierVerdict::to_json() const {
  return {{"in_A", in_A}, {"in_M", in_M}, {"in_LM", in_LM}, {"failures", failures}};
}

namespace {

std::string entry_name(int k) {
  return "(" + std::to_string(k / 2 + 1) + "," + std::to_string(k % 2 + 1) + ")";
}

}  // namespace

MultiplierVerdict multiplier_membership(const SymbolMatrix2& m, const Config& cfg) {
  std::array<EntryCheck, 4> checks;
  for (int k = 0; k < 4; ++k) checks[k] = check_entry(m.e[k], cfg);
  MultiplierVerdict v;
  auto test = [&](const std::array<SymbolClass, 4>& pat, const char* name) {
    bool ok = true;
    for (int k = 0; k < 4; ++k)
      if (!in_class(checks[k], pat[k], cfg)) {
        ok = false;
        v.failures.push_back(std::string(name) + ": entry " + entry_name(k) + " not in " +
                             symbol_class_name(pat[k]));
      }
    return ok;
  };
  v.in_A = test(pattern_A(), "A");
  v.in_M = test(pattern_M(), "M(A)");
  v.in_LM = test(pattern_LM(), "LM(A)");
  return v;
}

nlohmann::json MatrixSymbolOp::to_json() const {
  auto mat = [](const SymbolMatrix2& m) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : m.e) j.push_back(e.str());
    return j;
  };
  return {{"t", mat(t)},
          {"verdicts",
           {{"t", t_verdict.to_json()},
            {"a_t", a_verdict.to_json()},
            {"a_tstar", a_star_verdict.to_json()},
            {"b_t", b_verdict.to_json()}}}};
}

MatrixSymbolOp matrix_symbol_op(const SymbolMatrix2& t, const std::array<SymbolClass, 4>& declared,
                                const Config& cfg) {
  for (int k = 0; k < 4; ++k)
    if (!in_class(check_entry(t.e[k], cfg), declared[k], cfg))
      throw Error(Errc::ClassCheckFailed,
                  "entry " + entry_name(k) + " is not in " + symbol_class_name(declared[k]));
  MatrixSymbolOp op;
  op.t = t;
  const SymbolMatrix2 one = SymbolMatrix2::identity();
  op.a = (one + t.adjoint() * t).inverse();
  op.a_star = (one + t * t.adjoint()).inverse();
  op.b = t * op.a;
  op.t_verdict = multiplier_membership(t, cfg);
  op.a_verdict = multiplier_membership(op.a, cfg);
  op.a_star_verdict = multiplier_membership(op.a_star, cfg);
  op.b_verdict = multiplier_membership(op.b, cfg);
  return op;
}

// ------------------------------------------------------------ grid model

GridModel grid_model() {
  Eigen::MatrixXi full = Eigen::MatrixXi::Ones(2, 2);
  Eigen::MatrixXi e22 = Eigen::MatrixXi::Zero(2, 2);
  e22(1, 1) = 1;
  GridModel g;
  g.ambient = {AlgebraDescriptor::matrix_blocks({2, 2, 2}), 1};
  g.A = {AlgebraDescriptor::patterned({2, 2, 2}, {full, full, e22}), 1};
  Mat c = Mat::Identity(g.A.dim(), 8);  // the finite-point coordinates come first
  g.A0 = span_coords(g.A, c);
  g.mask_A = e22;
  g.mask_M = g.mask_LM = Eigen::MatrixXi::Zero(2, 2);
  g.mask_M(0, 0) = g.mask_M(1, 1) = 1;
  g.mask_LM = g.mask_M;
  g.mask_LM(1, 0) = 1;
  return g;
}

Mat grid_operator(const Eigen::Matrix2cd& at0, const Eigen::Matrix2cd& at1, const Eigen::Matrix2cd& at_inf) {
  Mat T = Mat::Zero(6, 6);
  T.block(0, 0, 2, 2) = at0;
  T.block(2, 2, 2, 2) = at1;
  T.block(4, 4, 2, 2) = at_inf;
  return T;
}

GraphOperator grid_restricted(const GridModel& g, const Mat& T) {
  return restrict_graph(graph_of(g.ambient, g.ambient, T), g.A, g.A);
}

GraphOperator grid_adjoint(const GridModel& g, const Mat& T, const Config& cfg) {
  return restrict_graph(adjoint_graph(graph_of(g.ambient, g.ambient, T), cfg), g.A, g.A);
}

bool fibre_in_pattern(const Mat& T, const Eigen::MatrixXi& mask, double tol) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!mask(r, c) && std::abs(T(4 + r, 4 + c)) > tol) return false;
  return true;
}

}  // namespace grreg
