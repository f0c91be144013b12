#include "grreg/experiments.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseQR>

#include "grreg/error.hpp"
#include "grreg/transforms.hpp"

namespace grreg {

namespace {

nlohmann::json cj(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

// Largest singular value through the Hermitian eigenproblem; fine at the sizes used here.
double spec_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Eigen::MatrixXi pattern_mask(const AlgebraDescriptor& alg) {
  const int n = alg.size();
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (const auto& [r, c] : alg.positions()) m(r, c) = 1;
  return m;
}

double outside(const Mat& x, const Eigen::MatrixXi& mask) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      if (!mask(r, c)) worst = std::max(worst, std::abs(x(r, c)));
  return worst;
}

}  // namespace

// ------------------------------------------------------------ resolvent test

nlohmann::json ResolventVerdict::to_json() const {
  return {{"lambda", cj(lambda)},
          {"min_sv", min_sv},
          {"multiplier", multiplier},
          {"dense_left", dense_left},
          {"dense_star", dense_star},
          {"verdict", affiliated ? "Affiliated" : "NotAffiliated"},
          {"failures", failures}};
}

ResolventVerdict resolvent_affiliation_check(const AlgebraDescriptor& alg, const Mat& t, cd lambda,
                                             const Config& cfg) {
  if (alg.kind == AlgebraDescriptor::Kind::SymbolAlgebra)
    throw Error(Errc::DescriptorMismatch, "resolvent test needs a finite algebra");
  const int n = alg.size();
  if (t.rows() != n || t.cols() != n) throw Error(Errc::DescriptorMismatch, "operator shape mismatch");
  ResolventVerdict v;
  v.lambda = lambda;
  const Mat shifted = t - lambda * Mat::Identity(n, n);
  v.min_sv = min_singular_value(shifted);
  if (v.min_sv <= cfg.spectrum_tol) throw Error(Errc::LambdaInSpectrum, "t - lambda is not invertible");
  v.resolvent = shifted.partialPivLu().solve(Mat::Identity(n, n));

  const Eigen::MatrixXi mask = pattern_mask(alg);
  const double tol = std::sqrt(cfg.rank_tol);
  double worst = 0.0;
  for (const auto& [r, c] : alg.positions()) {
    Mat e = Mat::Zero(n, n);
    e(r, c) = 1.0;
    worst = std::max({worst, outside(v.resolvent * e, mask), outside(e * v.resolvent, mask)});
  }
  v.multiplier = worst <= tol;
  if (!v.multiplier) {
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) {
        if (mask(r, c)) continue;
        // an entry outside the pattern that R moves mass into
        double hit = 0.0;
        for (const auto& [pr, pc] : alg.positions()) {
          if (pc == c) hit = std::max(hit, std::abs(v.resolvent(r, pr)));
          if (pr == r) hit = std::max(hit, std::abs(v.resolvent(pc, c)));
        }
        if (hit > tol)
          v.failures.push_back("multiplier: entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                               ") leaves the pattern");
      }
  }
  const ModuleSpec m{alg, 1};
  if (v.multiplier) {
    v.dense_left = numerical_rank(left_action_matrix(m, m, v.resolvent), cfg.rank_tol) == m.dim();
    v.dense_star = numerical_rank(left_action_matrix(m, m, v.resolvent.adjoint()), cfg.rank_tol) == m.dim();
    if (!v.dense_left) v.failures.push_back("density: (t-lambda)^-1 A is not dense");
    if (!v.dense_star) v.failures.push_back("density: (t*-conj(lambda))^-1 A is not dense");
  }
  v.affiliated = v.multiplier && v.dense_left && v.dense_star;
  return v;
}

RelationResiduals algebraic_relations(const Mat& t) {
  const AabTriple tr = aab_forward(t);
  const AabTriple ts = aab_forward(Mat(t.adjoint()));
  RelationResiduals r;
  r.quadratic = opnorm(tr.a_star - tr.a_star * tr.a_star - tr.b * ts.b);
  r.intertwining = opnorm(tr.a_star * tr.b - tr.b * tr.a);
  return r;
}

double q_relation_residual(const Mat& t, double q) {
  const AabTriple tr = aab_forward(t);
  const Eigen::Index n = t.rows();
  const Mat inner = Mat::Identity(n, n) + (1.0 / q - 1.0) * tr.a;
  return opnorm(tr.a_star - (1.0 / q) * inner.partialPivLu().solve(tr.a));
}

// ------------------------------------------------------------ counterdensity

bool TruncatedOperatorPair::allowed(int row, int col) const {
  const int h = K * K;
  const bool rb = row >= h, cb = col >= h;
  if (rb && cb) return true;
  const int r = row % h, c = col % h;
  return in_core(r % K, r / K) && in_core(c % K, c / K);
}

TruncatedOperatorPair counterdensity_pair(int K, const Config& cfg, bool control) {
  if (K < 8 || K > 64) throw Error(Errc::BadParameters, "K must lie in [8, 64]");
  TruncatedOperatorPair p;
  p.K = K;
  p.control = control;
  p.core = std::max(1, static_cast<int>(std::lround(cfg.core_fraction * K)));
  p.lambda.resize(K, K);
  const int h = K * K;
  std::vector<Eigen::Triplet<double>> trip;
  for (int l = 0; l < K; ++l)
    for (int k = 0; k < K; ++k) {
      const double lam = control ? 1.0 : 1.0 / (1.0 + k + l);
      p.lambda(k, l) = lam;
      const int j = p.index(k, l);
      if (k + 1 < K) trip.emplace_back(p.index(k + 1, l), j, 1.0);   // s
      trip.emplace_back(j, h + j, lam);                               // r
      if (k > 0) trip.emplace_back(h + p.index(k - 1, l), h + j, 1.0); // s*
    }
  p.x.resize(2 * h, 2 * h);
  p.x.setFromTriplets(trip.begin(), trip.end());
  p.x.makeCompressed();
  return p;
}

const char* density_side_name(DensitySide s) { return s == DensitySide::Left ? "Left" : "Star"; }

double density_defect(const TruncatedOperatorPair& pair, DensitySide side) {
  using SpMat = Eigen::SparseMatrix<double>;
  const int K = pair.K, h = K * K;
  const SpMat X = side == DensitySide::Left ? pair.x : SpMat(pair.x.transpose());

  // Target column (0, l) of the lower right block; the admissible unknowns of
  // y in that column only depend on whether (0, l) is a core index.
  double total = 0.0;
  for (int inner = 0; inner < 2; ++inner) {
    std::vector<int> cols;
    for (int l = 0; l < K; ++l)
      if (pair.in_core(0, l) == bool(inner)) cols.push_back(h + pair.index(0, l));
    if (cols.empty()) continue;
    std::vector<int> unknowns;
    for (int r = 0; r < 2 * h; ++r)
      if (pair.allowed(r, cols.front()) && X.col(r).nonZeros() > 0) unknowns.push_back(r);
    SpMat A(2 * h, static_cast<Eigen::Index>(unknowns.size()));
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t u = 0; u < unknowns.size(); ++u)
      for (SpMat::InnerIterator it(X, unknowns[u]); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(u), it.value());
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>> qr(A);
    if (qr.info() != Eigen::Success) throw Error(Errc::Inconclusive, "sparse QR failed");
    for (int c : cols) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * h);
      rhs(c) = 1.0;
      const Eigen::VectorXd sol = qr.solve(rhs);
      total += (rhs - A * sol).squaredNorm();
    }
  }
  return std::sqrt(total / K);
}

std::vector<DensityRow> density_sweep(const std::vector<int>& Ks, const Config& cfg, bool control) {
  std::vector<DensityRow> out;
  for (int K : Ks) {
    const TruncatedOperatorPair p = counterdensity_pair(K, cfg, control);
    out.push_back({K, density_defect(p, DensitySide::Left), density_defect(p, DensitySide::Star)});
  }
  return out;
}

nlohmann::json density_table_json(const std::vector<DensityRow>& rows, const Config& cfg, bool control) {
  nlohmann::json left = nlohmann::json::array(), star = nlohmann::json::array();
  bool left_dec = true, star_floor = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    left.push_back({{"param", rows[i].K}, {"value", rows[i].left}});
    star.push_back({{"param", rows[i].K}, {"value", rows[i].star}});
    if (i > 0 && !(rows[i].left < rows[i - 1].left)) left_dec = false;
    if (rows[i].star < 0.9 * rows.front().star) star_floor = false;
  }
  return {{"lambda_schedule", control ? "1" : "1/(1+k+l)"},
          {"core_fraction", cfg.core_fraction},
          {"left", left},
          {"star", star},
          {"left_strictly_decreasing", left_dec},
          {"star_above_floor", star_floor},
          {"star_floor", rows.empty() ? 0.0 : rows.front().star},
          {"note", "truncation trend; density itself is an infinite-dimensional property"}};
}

// ------------------------------------------------------------ Weyl demo

WeylGrid weyl_build(double alpha, double beta, int M, double L, bool dense) {
  if (alpha == 0.0) throw Error(Errc::BadParameters, "alpha must be nonzero");
  if (!(beta < 0.0)) throw Error(Errc::BadParameters, "beta must be negative");
  if (M < 256) throw Error(Errc::BadParameters, "M must be at least 256");
  if (!(L > 0.0)) throw Error(Errc::BadParameters, "L must be positive");
  WeylGrid w;
  w.alpha = alpha;
  w.beta = beta;
  w.M = M;
  w.L = L;
  w.delta = 2.0 * L / M;
  w.t.resize(M);
  w.xdiag.resize(M);
  for (int j = 0; j < M; ++j) {
    w.t(j) = -L + (j + 0.5) * w.delta;
    w.xdiag(j) = 1.0 / cd(w.t(j), -alpha);
  }
  if (dense) {
    w.y = Mat::Zero(M, M);
    for (int k = 0; k < M; ++k)
      for (int j = 0; j <= k; ++j) w.y(j, k) = -I_unit * std::exp(beta * (w.t(k) - w.t(j))) * w.delta;
  }
  return w;
}

Vec weyl_apply_y(const WeylGrid& w, const Vec& v) {
  const double q = std::exp(w.beta * w.delta);
  Vec out(w.M);
  cd acc = 0.0;
  for (int j = w.M - 1; j >= 0; --j) {
    acc = v(j) + q * acc;
    out(j) = -I_unit * w.delta * acc;
  }
  return out;
}

Vec weyl_apply_y_adjoint(const WeylGrid& w, const Vec& v) {
  const double q = std::exp(w.beta * w.delta);
  Vec out(w.M);
  cd acc = 0.0;
  for (int k = 0; k < w.M; ++k) {
    acc = v(k) + q * acc;
    out(k) = I_unit * w.delta * acc;
  }
  return out;
}

nlohmann::json WeylRelations::to_json() const {
  nlohmann::json sv = nlohmann::json::array();
  auto add = [&](Eigen::Index k) { sv.push_back({{"index", k}, {"value", sv_yx(k)}}); };
  if (sv_yx.size()) add(0);
  for (Eigen::Index k = 1; k < sv_yx.size(); k *= 2) add(k);
  return {{"M", M},
          {"norm_x", norm_x},
          {"norm_y", norm_y},
          {"xyrel1", xyrel1},
          {"xyrel2_plus_i", xyrel2_plus},
          {"xyrel2_minus_i", xyrel2_minus},
          {"yrel_interior", yrel_interior},
          {"yrel_full", yrel_full},
          {"sv_quarter", sv_quarter},
          {"sv_yx", sv}};
}

WeylRelations weyl_relations(const WeylGrid& w) {
  if (!w.dense()) throw Error(Errc::BadParameters, "relations need the dense kernel");
  WeylRelations r;
  r.M = w.M;
  const auto X = w.xdiag.asDiagonal();
  const Vec xs = w.xdiag.conjugate();
  r.norm_x = w.xdiag.cwiseAbs().maxCoeff();
  for (int j = 0; j < w.M; ++j) {
    const cd x = w.xdiag(j), xc = xs(j);
    r.xyrel1 = std::max({r.xyrel1, std::abs(x - xc - 2.0 * w.alpha * I_unit * xc * x),
                         std::abs(2.0 * w.alpha * I_unit * (xc * x - x * xc))});
  }
  const Mat& y = w.y;
  r.norm_y = spec_norm(y);
  const Mat xy = X * y, yx = y * X;
  const Mat xyyx = xy * yx;
  r.xyrel2_plus = spec_norm(xy - yx - I_unit * xyyx);
  r.xyrel2_minus = spec_norm(xy - yx + I_unit * xyyx);
  const Mat yrel = y - y.adjoint() - 2.0 * w.beta * I_unit * y.adjoint() * y;
  r.yrel_full = spec_norm(yrel);
  int lo = 0, hi = w.M;
  while (lo < w.M && w.t(lo) <= -w.L / 2) ++lo;
  while (hi > lo && w.t(hi - 1) >= w.L / 2) --hi;
  r.yrel_interior = spec_norm(yrel.block(lo, lo, hi - lo, hi - lo));
  Eigen::SelfAdjointEigenSolver<Mat> es(yx.adjoint() * yx, Eigen::EigenvaluesOnly);
  r.sv_yx = es.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  r.sv_quarter = r.sv_yx(w.M / 4);
  return r;
}

nlohmann::json WeylLimits::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& row : rows)
    rs.push_back({{"param", row.eps},
                  {"cells", row.cells},
                  {"norm", row.norm},
                  {"x_value", cj(row.x_value)},
                  {"x_error", row.x_error},
                  {"y_abs", row.y_abs},
                  {"yx_abs", row.yx_abs},
                  {"yxx_abs", row.yxx_abs},
                  {"yxy_abs", row.yxy_abs}});
  return {{"lambda", lambda}, {"target", cj(target)}, {"rows", rs}, {"x_monotone", x_monotone},
          {"y_monotone", y_monotone}};
}

std::vector<double> weyl_default_eps(const WeylGrid& w, const Config& cfg) {
  std::vector<double> out;
  for (int k = 5; k >= 0; --k) out.push_back(cfg.weyl_eps_floor_cells * w.delta * std::ldexp(1.0, k));
  return out;
}

WeylLimits weyl_limits(const WeylGrid& w, double lambda, const std::vector<double>& eps, const Config& cfg) {
  WeylLimits out;
  out.lambda = lambda;
  out.target = 1.0 / cd(lambda, -w.alpha);
  int first = 0;
  while (first < w.M && w.t(first) < lambda) ++first;
  for (double e : eps) {
    const int cells = static_cast<int>(std::lround(e / w.delta));
    if (cells < cfg.weyl_eps_floor_cells) throw Error(Errc::EpsilonBelowGrid, "eps below the grid floor");
    if (first + cells > w.M) throw Error(Errc::BadParameters, "window leaves the grid");
    Vec om = Vec::Zero(w.M);
    om.segment(first, cells).setConstant(1.0 / std::sqrt(cells * w.delta));
    auto ip = [&](const Vec& v) { return w.delta * om.dot(v); };  // <v, omega> with omega real
    WeylLimitRow row;
    row.eps = e;
    row.cells = cells;
    row.norm = ip(om).real();
    const Vec xo = w.xdiag.cwiseProduct(om);
    row.x_value = ip(xo);
    row.x_error = std::abs(row.x_value - out.target);
    const Vec yo = weyl_apply_y(w, om);
    row.y_abs = std::abs(ip(yo));
    row.yx_abs = std::abs(ip(weyl_apply_y(w, xo)));
    row.yxx_abs = std::abs(ip(weyl_apply_y(w, w.xdiag.cwiseProduct(xo))));
    row.yxy_abs = std::abs(ip(weyl_apply_y(w, w.xdiag.cwiseProduct(yo))));
    out.rows.push_back(row);
  }
  out.x_monotone = out.y_monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].eps < out.rows[i - 1].eps)) throw Error(Errc::BadParameters, "eps must decrease");
    if (!(out.rows[i].x_error < out.rows[i - 1].x_error)) out.x_monotone = false;
    if (!(out.rows[i].y_abs < out.rows[i - 1].y_abs)) out.y_monotone = false;
  }
  return out;
}

}  // namespace grreg
