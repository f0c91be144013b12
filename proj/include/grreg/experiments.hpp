#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "grreg/config.hpp"
#include "grreg/linalg.hpp"
#include "grreg/module.hpp"

namespace grreg {

// ------------------------------------------------------------ resolvent test

struct ResolventVerdict {
  cd lambda;
  double min_sv = 0;          // smallest singular value of t - lambda
  bool multiplier = false;    // R A in A and A R in A
  bool dense_left = false;    // R A = A (rank of left multiplication)
  bool dense_star = false;    // R* A = A
  bool affiliated = false;
  Mat resolvent;
  std::vector<std::string> failures;
  nlohmann::json to_json() const;
};

// (t - lambda)^-1 checked against the algebra pattern; throws LambdaInSpectrum.
ResolventVerdict resolvent_affiliation_check(const AlgebraDescriptor& alg, const Mat& t, cd lambda,
                                             const Config& cfg);

// ||a_* - a_*^2 - b_t b_{t*}|| and ||a_* b_t - b_t a_t||.
struct RelationResiduals {
  double quadratic = 0, intertwining = 0;
};
RelationResiduals algebraic_relations(const Mat& t);
// ||a_{t*} - q^-1 (1 + (q^-1 - 1) a_t)^-1 a_t|| for t with tt* = q t*t.
double q_relation_residual(const Mat& t, double q);

// ------------------------------------------------------------ counterdensity
//
// x = (s r; 0 s*) on l2 of a K x K index grid, twice.  s shifts the first
// index, r = diag(lambda_kl).  Indices (k, l) are stored at k + K l.

struct TruncatedOperatorPair {
  int K = 0;
  int core = 0;            // compact blocks live on {k, l < core}
  RMat lambda;             // K x K
  Eigen::SparseMatrix<double> x;  // 2K^2 x 2K^2
  bool control = false;    // r = identity

  int index(int k, int l) const { return k + K * l; }
  bool in_core(int k, int l) const { return k < core && l < core; }
  // Algebra pattern (K K; K B) at truncation.
  bool allowed(int row, int col) const;
};

TruncatedOperatorPair counterdensity_pair(int K, const Config& cfg, bool control = false);

enum class DensitySide { Left, Star };
const char* density_side_name(DensitySide s);

// sqrt(mean over the K target columns of the squared least-squares residual)
// for approximating (0 0; 0 P0) by x y (Left) or x* y (Star), y in the pattern.
double density_defect(const TruncatedOperatorPair& pair, DensitySide side);

struct DensityRow {
  int K = 0;
  double left = 0, star = 0;
};
std::vector<DensityRow> density_sweep(const std::vector<int>& Ks, const Config& cfg, bool control = false);
nlohmann::json density_table_json(const std::vector<DensityRow>& rows, const Config& cfg, bool control);

// ------------------------------------------------------------ Weyl demo

struct WeylGrid {
  double alpha = 1, beta = -1, L = 20, delta = 0;
  int M = 0;
  RVec t;      // midpoints -L + (j + 1/2) delta
  Vec xdiag;   // 1 / (t_j - alpha i)
  Mat y;       // -i e^{beta (t_k - t_j)} delta for k >= j; empty if not built densely

  bool dense() const { return y.size() > 0; }
};

// Throws BadParameters.
WeylGrid weyl_build(double alpha, double beta, int M, double L, bool dense = true);
// y v and y* v by recurrences, without the dense kernel.
Vec weyl_apply_y(const WeylGrid& w, const Vec& v);
Vec weyl_apply_y_adjoint(const WeylGrid& w, const Vec& v);

struct WeylRelations {
  int M = 0;
  double norm_x = 0, norm_y = 0;
  double xyrel1 = 0;        // max |x - x* - 2 alpha i x* x|, |x* x - x x*|
  double xyrel2_plus = 0;   // ||xy - yx - i x y^2 x||
  double xyrel2_minus = 0;  // ||xy - yx + i x y^2 x||
  double yrel_interior = 0; // ||y - y* - 2 beta i y* y|| on |t| < L/2
  double yrel_full = 0;
  RVec sv_yx;               // singular values of yx, descending
  double sv_quarter = 0;    // sv_yx(M/4)
  nlohmann::json to_json() const;
};
WeylRelations weyl_relations(const WeylGrid& w);

struct WeylLimitRow {
  double eps = 0;
  int cells = 0;
  double norm = 0;   // <omega, omega>
  cd x_value;        // <x omega, omega>
  double x_error = 0;
  double y_abs = 0;  // |<y omega, omega>|
  double yx_abs = 0, yxx_abs = 0, yxy_abs = 0;  // |<yx b omega, omega>|, b = 1, x, y
};
struct WeylLimits {
  double lambda = 0;
  cd target;  // (lambda - alpha i)^-1
  std::vector<WeylLimitRow> rows;  // eps decreasing
  bool x_monotone = false, y_monotone = false;
  nlohmann::json to_json() const;
};

// floor * 2^k for k = 5..0, floor = cfg.weyl_eps_floor_cells grid cells.
std::vector<double> weyl_default_eps(const WeylGrid& w, const Config& cfg);
// Throws EpsilonBelowGrid, BadParameters.
WeylLimits weyl_limits(const WeylGrid& w, double lambda, const std::vector<double>& eps, const Config& cfg);

}  // namespace grreg
