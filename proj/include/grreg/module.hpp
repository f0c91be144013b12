#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grreg/config.hpp"
#include "grreg/linalg.hpp"
#include "grreg/symbol.hpp"

namespace grreg {

enum class SymbolClass { C0, Cb, C0Unitized };
const char* symbol_class_name(SymbolClass c);

// Which C*-algebra an element lives in.
//
// MatrixBlocks is the finite-dimensional backend: a direct sum of full
// matrix algebras, each optionally restricted to a corner pattern (a 0/1
// mask of allowed entries).  Elements are stored as dense block-diagonal
// matrices of size sum(n_i).
struct AlgebraDescriptor {
  enum class Kind { MatrixBlocks, SymbolAlgebra, ToeplitzTrunc };
  Kind kind = Kind::MatrixBlocks;
  std::vector<int> blocks;
  std::vector<Eigen::MatrixXi> patterns;  // empty or one per block
  DomainSpec domain;
  SymbolClass cls = SymbolClass::C0;
  int N = 0;

  static AlgebraDescriptor matrix_blocks(std::vector<int> sizes);
  static AlgebraDescriptor patterned(std::vector<int> sizes, std::vector<Eigen::MatrixXi> patterns);
  static AlgebraDescriptor symbol_algebra(DomainSpec d, SymbolClass c);
  static AlgebraDescriptor toeplitz(int N);

  bool finite() const { return kind != Kind::SymbolAlgebra; }
  int size() const;  // side length of the dense representation
  int dim() const;   // scalar dimension
  // (row, col) positions of the scalar coordinates, in storage order
  std::vector<std::pair<int, int>> positions() const;
  bool operator==(const AlgebraDescriptor& o) const;
  void validate() const;
};

// The Hilbert module A^copies: columns of `copies` algebra elements.
struct ModuleSpec {
  AlgebraDescriptor algebra;
  int copies = 1;

  int dim() const { return copies * algebra.dim(); }
  int rows() const { return copies * algebra.size(); }
  bool operator==(const ModuleSpec& o) const { return algebra == o.algebra && copies == o.copies; }
};

ModuleSpec direct_sum(const ModuleSpec& e, const ModuleSpec& f);

// Coordinates <-> dense (copies*n) x n matrices.
Vec to_coords(const ModuleSpec& m, const Mat& x);
Mat from_coords(const ModuleSpec& m, const Vec& c);
bool in_module(const ModuleSpec& m, const Mat& x, double tol = 1e-12);

struct ModuleElement {
  ModuleSpec space;
  Mat value;  // dense (copies*n) x n
};

// <x, y> = x* y, an element of the algebra (dense n x n).
Mat inner_product(const ModuleElement& x, const ModuleElement& y);
double module_norm(const ModuleElement& x);

// A right submodule stored as an orthonormal basis of scalar coordinates.
struct Submodule {
  ModuleSpec ambient;
  Mat basis;  // dim x k, orthonormal columns

  int dimension() const { return static_cast<int>(basis.cols()); }
};

Submodule zero_submodule(const ModuleSpec& m);
Submodule full_submodule(const ModuleSpec& m);
// Closed span of generators under the right action of the algebra.
Submodule generate(const ModuleSpec& m, const std::vector<Mat>& generators, double tol = 1e-10);
Submodule span_coords(const ModuleSpec& m, const Mat& coords, double tol = 1e-10);
// Residual of closure under right multiplication by the algebra's matrix units.
double right_action_residual(const Submodule& s);

Submodule orthogonal_complement(const Submodule& F, double tol = 1e-10);
bool is_essential(const Submodule& F, double tol = 1e-10);
bool is_orthogonally_closed(const Submodule& F, double tol = 1e-10);
bool same_submodule(const Submodule& a, const Submodule& b, double tol = 1e-10);
Submodule sum(const Submodule& a, const Submodule& b, double tol = 1e-10);
Submodule intersect(const Submodule& a, const Submodule& b, double tol = 1e-10);

// Scalar matrix of x -> T x on coordinates, T a dense ((copies_F*n) x (copies_E*n)) operator.
Mat left_action_matrix(const ModuleSpec& e, const ModuleSpec& f, const Mat& T);

struct GraphSubspace {
  Submodule graph;  // inside E (+) F
};
struct QuotientPair {
  Mat a, b;  // coordinate matrices: a on E, b : E -> F; t(a x) = b x
};
struct SymbolOp {
  PiecewiseSymbol m;
};

// An essentially defined operator represented by its graph.
struct GraphOperator {
  ModuleSpec source, target;
  std::variant<GraphSubspace, QuotientPair, SymbolOp> rep;

  bool is_graph_subspace() const { return std::holds_alternative<GraphSubspace>(rep); }
  const Submodule& graph() const { return std::get<GraphSubspace>(rep).graph; }
};

// Graph of x -> T x on the maximal domain {x in E : T x in F}.
GraphOperator graph_of(const ModuleSpec& e, const ModuleSpec& f, const Mat& T, double tol = 1e-10);
GraphOperator from_quotient(const ModuleSpec& e, const ModuleSpec& f, const Mat& a, const Mat& b,
                            double tol = 1e-10);
GraphOperator to_graph_subspace(const GraphOperator& t, double tol = 1e-10);

Submodule domain_of(const GraphOperator& t, double tol = 1e-10);
Submodule range_of(const GraphOperator& t, double tol = 1e-10);
// Minimal principal angle between Graph(t) and 0 (+) F (pi/2 when either is trivial).
double graph_angle(const GraphOperator& t);
bool is_graph(const GraphOperator& t, const Config& cfg);
// Coordinate matrix of t on its domain: maps Def(t) coordinates into F, zero on Def(t)^perp.
Mat action_matrix(const GraphOperator& t, double tol = 1e-10);

GraphOperator adjoint_graph(const GraphOperator& t, const Config& cfg);
// Adjoint computed in an ambient module pair, then restricted to the given submodule pattern.
GraphOperator restrict_graph(const GraphOperator& t, const ModuleSpec& e, const ModuleSpec& f,
                             double tol = 1e-10);
// s o t on {x in Def(t) : t x in Def(s)}.
GraphOperator compose(const GraphOperator& s, const GraphOperator& t, double tol = 1e-10);

// Coordinate matrix of p_G; throws NotOrthogonallyClosed.
Mat projection_onto(const Submodule& G, double tol = 1e-10);

struct RegularityVerdict {
  bool essentially_defined = false;
  bool orthogonally_closed = false;
  bool range_one_plus_tstar_t = false;
  bool range_one_plus_t_tstar = false;
  bool graph_regular = false;
  bool regular = false;
  std::string diagnostics;
};

RegularityVerdict is_graph_regular(const GraphOperator& t, const Config& cfg);

}  // namespace grreg
