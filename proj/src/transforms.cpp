#include "grreg/transforms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "grreg/error.hpp"

namespace grreg {

namespace {

Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

// Inverse of a Hermitian positive definite matrix.
Mat hpd_inverse(const Mat& m) { return m.llt().solve(eye(m.rows())); }

std::pair<double, double> eig_range(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace

AabTriple aab_forward(const Mat& t) {
  const Mat ts = t.adjoint();
  AabTriple tr;
  tr.a = hpd_inverse(eye(t.cols()) + ts * t);
  tr.a_star = hpd_inverse(eye(t.rows()) + t * ts);
  tr.b = t * tr.a;
  return tr;
}

AabTriple aab_forward(const GraphOperator& t, const Config& cfg) {
  RegularityVerdict v = is_graph_regular(t, cfg);
  if (!v.graph_regular) throw Error(Errc::NotGraphRegular, v.diagnostics);
  return aab_forward(action_matrix(t, cfg.rank_tol));
}

nlohmann::json AxiomReport::to_json() const {
  return {{"bb", bb},
          {"bbstar", bbstar},
          {"abstar", abstar},
          {"hermitian_a", hermitian_a},
          {"hermitian_a_star", hermitian_a_star},
          {"eig_a", {min_eig_a, max_eig_a}},
          {"eig_a_star", {min_eig_a_star, max_eig_a_star}},
          {"norm_b", norm_b},
          {"min_sv_a", min_sv_a},
          {"min_sv_a_star", min_sv_a_star},
          {"commutation", {{"sqrt", comm_sqrt}, {"square", comm_square}, {"cube", comm_cube}}},
          {"valid", valid},
          {"failures", failures}};
}

AxiomReport ab_axioms_check(const AabTriple& tr, const Config& cfg) {
  const Mat &a = tr.a, &as = tr.a_star, &b = tr.b;
  if (a.rows() != a.cols() || as.rows() != as.cols() || b.rows() != as.rows() || b.cols() != a.rows())
    throw Error(Errc::DescriptorMismatch, "triple shapes do not fit E and F");
  const Mat bs = b.adjoint();
  AxiomReport r;
  r.bb = opnorm(bs * b - (a - a * a));
  r.bbstar = opnorm(b * bs - (as - as * as));
  r.abstar = opnorm(a * bs - bs * as);
  r.hermitian_a = opnorm(a - a.adjoint());
  r.hermitian_a_star = opnorm(as - as.adjoint());
  std::tie(r.min_eig_a, r.max_eig_a) = eig_range(a);
  std::tie(r.min_eig_a_star, r.max_eig_a_star) = eig_range(as);
  r.norm_b = opnorm(b);
  r.min_sv_a = min_singular_value(a);
  r.min_sv_a_star = min_singular_value(as);
  r.comm_sqrt = opnorm(psd_sqrt(as, cfg.psd_clamp) * b - b * psd_sqrt(a, cfg.psd_clamp));
  r.comm_square = opnorm(as * as * b - b * a * a);
  r.comm_cube = opnorm(as * as * as * b - b * a * a * a);

  const double tol = cfg.axiom_tol;
  auto need = [&](bool ok, const char* what) {
    if (!ok) r.failures.push_back(what);
  };
  need(r.bb <= tol, "b*b = a - a^2");
  need(r.bbstar <= tol, "bb* = a_* - a_*^2");
  need(r.abstar <= tol, "ab* = b*a_*");
  need(r.hermitian_a <= tol, "a = a*");
  need(r.hermitian_a_star <= tol, "a_* = a_**");
  need(r.min_eig_a >= -tol && r.max_eig_a <= 1 + tol, "0 <= a <= 1");
  need(r.min_eig_a_star >= -tol && r.max_eig_a_star <= 1 + tol, "0 <= a_* <= 1");
  need(r.norm_b <= 1 + tol, "||b|| <= 1");
  need(r.min_sv_a > cfg.kernel_tol, "ker a = 0");
  need(r.min_sv_a_star > cfg.kernel_tol, "ker a_* = 0");
  // the commutation family follows from the axioms; its error grows like sqrt of theirs
  const double ctol = std::sqrt(tol);
  need(r.comm_sqrt <= ctol, "sqrt(a_*) b = b sqrt(a)");
  need(r.comm_square <= tol, "a_*^2 b = b a^2");
  need(r.comm_cube <= tol, "a_*^3 b = b a^3");
  r.valid = r.failures.empty();
  return r;
}

Mat aab_inverse(const AabTriple& tr, const Config& cfg) {
  AxiomReport r = ab_axioms_check(tr, cfg);
  if (!r.valid) throw Error(Errc::AxiomsFailed, r.failures.front());
  // t a = b  <=>  a t* = b*
  return tr.a.partialPivLu().solve(tr.b.adjoint()).adjoint();
}

GraphOperator aab_inverse_graph(const AabTriple& tr, const ModuleSpec& e, const ModuleSpec& f,
                                const Config& cfg) {
  AxiomReport r = ab_axioms_check(tr, cfg);
  if (!r.valid) throw Error(Errc::AxiomsFailed, r.failures.front());
  return from_quotient(e, f, left_action_matrix(e, e, tr.a), left_action_matrix(e, f, tr.b), cfg.rank_tol);
}

Mat graph_projection(const AabTriple& tr, const Config& cfg) {
  AxiomReport r = ab_axioms_check(tr, cfg);
  if (!r.valid) throw Error(Errc::AxiomsFailed, r.failures.front());
  const Eigen::Index n = tr.a.rows(), m = tr.a_star.rows();
  Mat p(n + m, n + m);
  p << tr.a, tr.b.adjoint(), tr.b, eye(m) - tr.a_star;
  return p;
}

BoundedTransform make_bounded(const Mat& z, const Config& cfg) {
  BoundedTransform bt;
  bt.z = z;
  bt.norm = opnorm(z);
  bt.min_sv_defect = min_singular_value(eye(z.cols()) - z.adjoint() * z);
  bt.in_Z = bt.norm <= 1 + cfg.kernel_tol && bt.min_sv_defect > cfg.kernel_tol;
  // injective and square, hence onto
  bt.in_Zd = bt.in_Z;
  return bt;
}

BoundedTransform bounded_transform(const Mat& t, const Config& cfg) {
  Mat a = hpd_inverse(eye(t.cols()) + t.adjoint() * t);
  return make_bounded(t * psd_sqrt(a, cfg.psd_clamp), cfg);
}

Mat from_bounded(const BoundedTransform& z, const Config& cfg) {
  if (!z.in_Z) throw Error(Errc::KernelNotTrivial, "1 - z*z has a nontrivial kernel");
  Mat d = eye(z.z.cols()) - z.z.adjoint() * z.z;
  return z.z * psd_pow(d, -0.5, cfg.psd_clamp);
}

// (t*t)^{1/2} as V S V*; the square root of t*t loses half the digits near the kernel.
Mat abs_operator(const Mat& t) {
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullV);
  const Mat& V = svd.matrixV();
  const Eigen::Index k = svd.singularValues().size();
  return V.leftCols(k) * svd.singularValues().cast<cd>().asDiagonal() * V.leftCols(k).adjoint();
}

AabTriple absolute_value(const AabTriple& tr, const Config& cfg) {
  AxiomReport r = ab_axioms_check(tr, cfg);
  if (!r.valid) throw Error(Errc::AxiomsFailed, r.failures.front());
  return {tr.a, tr.a, abs_operator(tr.b)};
}

Polar polar_decompose(const Mat& t, const Config& cfg) {
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double cut = cfg.rank_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  const Mat& U = svd.matrixU();
  const Mat& V = svd.matrixV();
  Polar p;
  p.v = U.leftCols(r) * V.leftCols(r).adjoint();
  p.abs = V.leftCols(r) * s.head(r).cast<cd>().asDiagonal() * V.leftCols(r).adjoint();
  return p;
}

Mat functional_calculus(const AabTriple& tr, const Expr& g, cd beta, const Config& cfg) {
  const Mat &a = tr.a, &b = tr.b;
  if (b.rows() != b.cols() || opnorm(a - tr.a_star) > cfg.axiom_tol)
    throw Error(Errc::NotNormal, "a_t differs from a_{t*}");
  Rng rng(cfg.seed);
  const cd kappa = rng.cnormal();
  Eigen::ComplexSchur<Mat> schur(a + kappa * b);
  const Mat& U = schur.matrixU();
  Mat da = U.adjoint() * a * U, db = U.adjoint() * b * U;
  const double off = (da - Mat(da.diagonal().asDiagonal())).norm() + (db - Mat(db.diagonal().asDiagonal())).norm();
  if (off > cfg.commute_tol * std::max(1.0, a.norm() + b.norm()))
    throw Error(Errc::NonCommutingPair, "joint diagonalisation residual " + std::to_string(off));
  Vec vals(a.rows());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double z1 = da(i, i).real();
    vals(i) = z1 > cfg.kernel_tol ? g(db(i, i) / z1) + beta : beta;
  }
  return U * vals.asDiagonal() * U.adjoint();
}

Mat random_operator(Rng& rng, int n) {
  Mat t = rng.gaussian(n, n) * (std::exp(rng.uniform(-1.0, 1.0)) / std::sqrt(double(n)));
  if (n > 1 && rng.integer(0, 3) == 0) {
    // a nontrivial kernel
    const int k = rng.integer(1, n - 1);
    Mat q = rng.unitary(n);
    t = t * q.leftCols(n - k) * q.leftCols(n - k).adjoint();
  }
  return t;
}

// ------------------------------------------------------------ symbol backend

namespace {

PiecewiseSymbol verified(const PiecewiseSymbol& m, const Config& cfg) {
  return m.verified() ? m : verify_declarations(m, cfg);
}

}  // namespace

SymbolTriple symbol_aab(const PiecewiseSymbol& m, const Config& cfg) {
  RegularityReport r = regularity_report(verified(m, cfg), cfg);
  if (!r.graph_regular) throw Error(Errc::NotGraphRegular, "the symbol has a point of singsupp");
  return {*r.a_symbol, *r.a_symbol, *r.b_symbol};
}

SymbolAxiomReport symbol_axioms(const SymbolTriple& tr, const Config& cfg) {
  SymbolAxiomReport r;
  r.min_a = 1.0;
  std::vector<double> xs = sample_grid(tr.a.domain(), cfg.grid_points, cfg.window_R);
  for (const auto& p : tr.a.pieces())
    if (p.lo == p.hi) xs.push_back(p.lo);
  bool finite = true;
  for (double x : xs) {
    const cd a = tr.a(x), as = tr.a_star(x), b = tr.b(x);
    if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)) || !std::isfinite(std::abs(as))) {
      finite = false;
      continue;
    }
    r.bb = std::max(r.bb, std::abs(std::norm(b) - (a - a * a)));
    r.abstar = std::max(r.abstar, std::abs(a * std::conj(b) - std::conj(b) * as));
    r.min_a = std::min(r.min_a, a.real());
    r.max_a = std::max(r.max_a, a.real());
    r.max_b = std::max(r.max_b, std::abs(b));
    r.normal = std::max(r.normal, std::abs(a - as));
  }
  const double tol = cfg.symbol_tol;
  r.valid = finite && r.bb <= tol && r.abstar <= tol && r.min_a >= -tol && r.max_a <= 1 + tol &&
            r.max_b <= 1 + tol;
  return r;
}

double symbol_inverse_residual(const SymbolTriple& tr, const PiecewiseSymbol& m, const Config& cfg) {
  double worst = 0.0;
  for (double x : sample_grid(m.domain(), cfg.grid_points, cfg.window_R)) {
    const cd mv = m(x);
    const cd rec = tr.b(x) / tr.a(x);
    worst = std::max(worst, std::abs(rec - mv) / std::max(1.0, std::abs(mv)));
  }
  return worst;
}

SymbolTriple symbol_absolute_value(const SymbolTriple& tr) { return {tr.a, tr.a, tr.b.abs()}; }

SymbolBounded symbol_bounded_transform(const PiecewiseSymbol& m, const Config& cfg) {
  PiecewiseSymbol h = hat_extension(verified(m, cfg));
  SymbolBounded out;
  out.z = h.map([](const Expr& e) {
    return e / Expr::func(Expr::Fn::Sqrt, Expr::number(1.0) + Expr::func(Expr::Fn::Abs, e).pow(2));
  });
  for (double p : h.domain().punctures) {
    Detection d = detect_class(out.z, Location::at(p), cfg);
    if (d.cls != PointClass::RegB) {
      out.extends_continuously = false;
      out.obstructions.push_back("z is " + std::string(point_class_name(d.cls)) + " at " + Location::at(p).str());
    }
  }
  return out;
}

std::vector<cd> symbol_functional_calculus(const PiecewiseSymbol& m, const Expr& g, cd beta,
                                           const std::vector<double>& xs, const Config& cfg) {
  PiecewiseSymbol h = hat_extension(verified(m, cfg));
  std::vector<double> inf_points;
  for (const auto& d : h.declarations())
    if (!d.at.infinity && d.cls == PointClass::RegInf) inf_points.push_back(d.at.x);
  std::vector<cd> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (std::find(inf_points.begin(), inf_points.end(), x) != inf_points.end()) {
      out.push_back(beta);
      continue;
    }
    out.push_back(g(h(x)) + beta);
  }
  return out;
}

}  // namespace grreg
