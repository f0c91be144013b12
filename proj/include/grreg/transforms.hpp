#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "grreg/config.hpp"
#include "grreg/expr.hpp"
#include "grreg/linalg.hpp"
#include "grreg/module.hpp"
#include "grreg/symbol.hpp"

namespace grreg {

// ------------------------------------------------------------ matrix backend
//
// Operators are dense matrices acting by left multiplication on a finite
// module; a is an operator on E, a_star on F, and b maps E to F.

struct AabTriple {
  Mat a, a_star, b;
};

// (1+t*t)^-1, (1+tt*)^-1, t(1+t*t)^-1.
AabTriple aab_forward(const Mat& t);
// Same for a graph operator; throws NotGraphRegular.
AabTriple aab_forward(const GraphOperator& t, const Config& cfg);

struct AxiomReport {
  double bb = 0, bbstar = 0, abstar = 0;  // ||b*b-(a-a^2)||, ||bb*-(a_*-a_*^2)||, ||ab*-b*a_*||
  double hermitian_a = 0, hermitian_a_star = 0;
  double min_eig_a = 0, max_eig_a = 0, min_eig_a_star = 0, max_eig_a_star = 0;
  double norm_b = 0;
  double min_sv_a = 0, min_sv_a_star = 0;
  double comm_sqrt = 0, comm_square = 0, comm_cube = 0;  // ||f(a_*)b - b f(a)||
  bool valid = false;
  std::vector<std::string> failures;
  nlohmann::json to_json() const;
};
AxiomReport ab_axioms_check(const AabTriple& tr, const Config& cfg);

// t = b a^{-1}; throws AxiomsFailed.
Mat aab_inverse(const AabTriple& tr, const Config& cfg);
// The same operator as a quotient pair t(ax) = bx on the module of n x n matrices.
GraphOperator aab_inverse_graph(const AabTriple& tr, const ModuleSpec& e, const ModuleSpec& f,
                                const Config& cfg);

// p = (a b*; b 1-a_*) on E (+) F.
Mat graph_projection(const AabTriple& tr, const Config& cfg);

struct BoundedTransform {
  Mat z;
  bool in_Z = false;   // ker(1-z*z) = {0}
  bool in_Zd = false;  // Range(1-z*z) dense
  double norm = 0;
  double min_sv_defect = 0;  // smallest singular value of 1-z*z
};
// z = t a^{1/2}.
BoundedTransform bounded_transform(const Mat& t, const Config& cfg);
BoundedTransform make_bounded(const Mat& z, const Config& cfg);
// t_z = z (1-z*z)^{-1/2}; throws KernelNotTrivial.
Mat from_bounded(const BoundedTransform& z, const Config& cfg);

// (a, a, |b|).
AabTriple absolute_value(const AabTriple& tr, const Config& cfg);
Mat abs_operator(const Mat& t);  // (t*t)^{1/2}

struct Polar {
  Mat v, abs;
};
Polar polar_decompose(const Mat& t, const Config& cfg);

// g(t) + beta for a normal triple, g evaluated on w = z2/z1 over the joint
// spectrum (z1, z2) of (a, b); points with z1 = 0 are the point at infinity
// and get the value beta.
Mat functional_calculus(const AabTriple& tr, const Expr& g, cd beta, const Config& cfg);

// A random operator whose triple is well conditioned enough for 1e-10 checks.
Mat random_operator(Rng& rng, int n);

// ------------------------------------------------------------ symbol backend

struct SymbolTriple {
  PiecewiseSymbol a, a_star, b;
};

// From a verified graph-regular symbol; normal, so a_star = a. Throws NotGraphRegular.
SymbolTriple symbol_aab(const PiecewiseSymbol& m, const Config& cfg);

struct SymbolAxiomReport {
  double bb = 0, abstar = 0;   // max |conj(b) b - (a - a^2)|, max |a conj(b) - conj(b) a_*|
  double min_a = 0, max_a = 0, max_b = 0;
  double normal = 0;           // max |a - a_*|
  bool valid = false;
};
SymbolAxiomReport symbol_axioms(const SymbolTriple& tr, const Config& cfg);

// max |b/a - m| / max(1,|m|) over the regular sample grid.
double symbol_inverse_residual(const SymbolTriple& tr, const PiecewiseSymbol& m, const Config& cfg);

SymbolTriple symbol_absolute_value(const SymbolTriple& tr);

struct SymbolBounded {
  PiecewiseSymbol z;  // m / sqrt(1+|m|^2) on reg(m)
  bool extends_continuously = true;  // every puncture of m is RegB for z
  std::vector<std::string> obstructions;
};
SymbolBounded symbol_bounded_transform(const PiecewiseSymbol& m, const Config& cfg);

// Values of g(m(x)) + beta on the points xs; beta at RegInf points of m.
std::vector<cd> symbol_functional_calculus(const PiecewiseSymbol& m, const Expr& g, cd beta,
                                           const std::vector<double>& xs, const Config& cfg);

}  // namespace grreg
