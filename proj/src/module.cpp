#include "grreg/module.hpp"

#include <cmath>
#include <numbers>

#include "grreg/error.hpp"

namespace grreg {

const char* symbol_class_name(SymbolClass c) {
  switch (c) {
    case SymbolClass::C0: return "C0";
    case SymbolClass::Cb: return "Cb";
    case SymbolClass::C0Unitized: return "C0Unitized";
  }
  return "?";
}

// ------------------------------------------------------------ descriptors

AlgebraDescriptor AlgebraDescriptor::matrix_blocks(std::vector<int> sizes) {
  AlgebraDescriptor a;
  a.kind = Kind::MatrixBlocks;
  a.blocks = std::move(sizes);
  a.validate();
  return a;
}

AlgebraDescriptor AlgebraDescriptor::patterned(std::vector<int> sizes, std::vector<Eigen::MatrixXi> pats) {
  AlgebraDescriptor a;
  a.kind = Kind::MatrixBlocks;
  a.blocks = std::move(sizes);
  a.patterns = std::move(pats);
  a.validate();
  return a;
}

AlgebraDescriptor AlgebraDescriptor::symbol_algebra(DomainSpec d, SymbolClass c) {
  AlgebraDescriptor a;
  a.kind = Kind::SymbolAlgebra;
  a.domain = std::move(d);
  a.cls = c;
  return a;
}

AlgebraDescriptor AlgebraDescriptor::toeplitz(int N) {
  AlgebraDescriptor a;
  a.kind = Kind::ToeplitzTrunc;
  a.N = N;
  a.validate();
  return a;
}

void AlgebraDescriptor::validate() const {
  if (kind == Kind::MatrixBlocks) {
    if (blocks.empty()) throw Error(Errc::InvalidInput, "MatrixBlocks needs at least one block");
    for (int n : blocks)
      if (n < 1) throw Error(Errc::InvalidInput, "block sizes must be >= 1");
    if (!patterns.empty()) {
      if (patterns.size() != blocks.size()) throw Error(Errc::InvalidInput, "one pattern per block");
      for (std::size_t k = 0; k < blocks.size(); ++k)
        if (patterns[k].rows() != blocks[k] || patterns[k].cols() != blocks[k])
          throw Error(Errc::InvalidInput, "pattern size must match its block");
    }
  }
  if (kind == Kind::ToeplitzTrunc && N < 2) throw Error(Errc::InvalidInput, "ToeplitzTrunc needs N >= 2");
}

int AlgebraDescriptor::size() const {
  switch (kind) {
    case Kind::MatrixBlocks: {
      int s = 0;
      for (int n : blocks) s += n;
      return s;
    }
    case Kind::ToeplitzTrunc: return N;
    case Kind::SymbolAlgebra: break;
  }
  throw Error(Errc::DescriptorMismatch, "symbol algebras have no finite representation");
}

std::vector<std::pair<int, int>> AlgebraDescriptor::positions() const {
  std::vector<std::pair<int, int>> out;
  if (kind == Kind::ToeplitzTrunc) {
    for (int c = 0; c < N; ++c)
      for (int r = 0; r < N; ++r) out.emplace_back(r, c);
    return out;
  }
  if (kind != Kind::MatrixBlocks) throw Error(Errc::DescriptorMismatch, "symbol algebras have no coordinates");
  int off = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int n = blocks[k];
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r)
        if (patterns.empty() || patterns[k](r, c)) out.emplace_back(off + r, off + c);
    off += n;
  }
  return out;
}

int AlgebraDescriptor::dim() const { return static_cast<int>(positions().size()); }

bool AlgebraDescriptor::operator==(const AlgebraDescriptor& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::MatrixBlocks:
      if (blocks != o.blocks || patterns.size() != o.patterns.size()) return false;
      for (std::size_t k = 0; k < patterns.size(); ++k)
        if (patterns[k] != o.patterns[k]) return false;
      return true;
    case Kind::ToeplitzTrunc: return N == o.N;
    case Kind::SymbolAlgebra: return domain == o.domain && cls == o.cls;
  }
  return false;
}

ModuleSpec direct_sum(const ModuleSpec& e, const ModuleSpec& f) {
  if (!(e.algebra == f.algebra)) throw Error(Errc::DescriptorMismatch, "direct sum over different algebras");
  return {e.algebra, e.copies + f.copies};
}

// ------------------------------------------------------------ coordinates

Vec to_coords(const ModuleSpec& m, const Mat& x) {
  const auto pos = m.algebra.positions();
  const int n = m.algebra.size();
  Vec c(m.dim());
  Eigen::Index k = 0;
  for (int cp = 0; cp < m.copies; ++cp)
    for (const auto& [r, col] : pos) c(k++) = x(cp * n + r, col);
  return c;
}

Mat from_coords(const ModuleSpec& m, const Vec& c) {
  const auto pos = m.algebra.positions();
  const int n = m.algebra.size();
  Mat x = Mat::Zero(m.rows(), n);
  Eigen::Index k = 0;
  for (int cp = 0; cp < m.copies; ++cp)
    for (const auto& [r, col] : pos) x(cp * n + r, col) = c(k++);
  return x;
}

bool in_module(const ModuleSpec& m, const Mat& x, double tol) {
  if (x.rows() != m.rows() || x.cols() != m.algebra.size()) return false;
  return (x - from_coords(m, to_coords(m, x))).norm() <= tol * std::max(1.0, x.norm());
}

Mat inner_product(const ModuleElement& x, const ModuleElement& y) {
  if (!(x.space == y.space)) throw Error(Errc::DescriptorMismatch, "inner product of elements of different modules");
  return x.value.adjoint() * y.value;
}

double module_norm(const ModuleElement& x) { return std::sqrt(opnorm(inner_product(x, x))); }

// ------------------------------------------------------------ submodules

Submodule zero_submodule(const ModuleSpec& m) { return {m, Mat(m.dim(), 0)}; }
Submodule full_submodule(const ModuleSpec& m) { return {m, Mat::Identity(m.dim(), m.dim())}; }

namespace {

std::vector<Mat> matrix_units(const AlgebraDescriptor& a) {
  std::vector<Mat> out;
  const int n = a.size();
  for (const auto& [r, c] : a.positions()) {
    Mat e = Mat::Zero(n, n);
    e(r, c) = 1.0;
    out.push_back(e);
  }
  return out;
}

Mat right_closure(const ModuleSpec& m, Mat q, double tol) {
  const auto units = matrix_units(m.algebra);
  for (;;) {
    Mat big(m.dim(), q.cols() * (1 + Eigen::Index(units.size())));
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      Mat x = from_coords(m, q.col(j));
      big.col(k++) = q.col(j);
      for (const auto& e : units) big.col(k++) = to_coords(m, x * e);
    }
    Mat nq = orth(big, tol);
    if (nq.cols() == q.cols()) return nq;
    q = nq;
  }
}

}  // namespace

Submodule span_coords(const ModuleSpec& m, const Mat& coords, double tol) {
  if (coords.cols() == 0) return zero_submodule(m);
  return {m, right_closure(m, orth(coords, tol), tol)};
}

Submodule generate(const ModuleSpec& m, const std::vector<Mat>& gens, double tol) {
  Mat c(m.dim(), Eigen::Index(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (!in_module(m, gens[k])) throw Error(Errc::DescriptorMismatch, "generator is not an element of the module");
    c.col(Eigen::Index(k)) = to_coords(m, gens[k]);
  }
  return span_coords(m, c, tol);
}

double right_action_residual(const Submodule& s) {
  double worst = 0.0;
  const auto units = matrix_units(s.ambient.algebra);
  for (Eigen::Index j = 0; j < s.basis.cols(); ++j) {
    Mat x = from_coords(s.ambient, s.basis.col(j));
    for (const auto& e : units) {
      Vec v = to_coords(s.ambient, x * e);
      worst = std::max(worst, (v - s.basis * (s.basis.adjoint() * v)).norm());
    }
  }
  return worst;
}

Submodule orthogonal_complement(const Submodule& F, double tol) {
  const ModuleSpec& m = F.ambient;
  const auto pos = m.algebra.positions();
  const int n = m.algebra.size();
  const Eigen::Index k = F.basis.cols();
  if (k == 0) return full_submodule(m);
  // rows: for each generator g and each algebra position (r, c), the entry (g* x)_{rc}
  Mat C = Mat::Zero(k * Eigen::Index(pos.size()), m.dim());
  for (Eigen::Index j = 0; j < k; ++j) {
    Mat g = from_coords(m, F.basis.col(j));
    for (int d = 0; d < m.dim(); ++d) {
      Vec e = Vec::Zero(m.dim());
      e(d) = 1.0;
      Mat gx = g.adjoint() * from_coords(m, e);
      for (std::size_t p = 0; p < pos.size(); ++p)
        C(j * Eigen::Index(pos.size()) + Eigen::Index(p), d) = gx(pos[p].first, pos[p].second);
    }
  }
  (void)n;
  return {m, null_space(C, tol)};
}

bool is_essential(const Submodule& F, double tol) { return orthogonal_complement(F, tol).dimension() == 0; }

bool same_submodule(const Submodule& a, const Submodule& b, double tol) {
  if (!(a.ambient == b.ambient)) return false;
  return same_subspace(a.basis, b.basis, std::sqrt(tol));
}

bool is_orthogonally_closed(const Submodule& F, double tol) {
  return same_submodule(F, orthogonal_complement(orthogonal_complement(F, tol), tol), tol);
}

Submodule sum(const Submodule& a, const Submodule& b, double tol) {
  Mat c(a.basis.rows(), a.basis.cols() + b.basis.cols());
  c << a.basis, b.basis;
  return {a.ambient, orth(c, tol)};
}

Submodule intersect(const Submodule& a, const Submodule& b, double tol) {
  return {a.ambient, intersect_subspaces(a.basis, b.basis, tol)};
}

// ------------------------------------------------------------ operators

namespace {

// Full dense vec of T X for every coordinate basis vector of E.
Mat full_left_image(const ModuleSpec& e, const Mat& T) {
  const int n = e.algebra.size();
  Mat out(T.rows() * n, e.dim());
  for (int d = 0; d < e.dim(); ++d) {
    Vec v = Vec::Zero(e.dim());
    v(d) = 1.0;
    Mat y = T * from_coords(e, v);
    out.col(d) = Eigen::Map<const Vec>(y.data(), y.size());
  }
  return out;
}

std::vector<bool> allowed_mask(const ModuleSpec& f) {
  const int n = f.algebra.size();
  std::vector<bool> mask(std::size_t(f.rows()) * n, false);
  for (int cp = 0; cp < f.copies; ++cp)
    for (const auto& [r, c] : f.algebra.positions()) mask[std::size_t(c) * f.rows() + cp * n + r] = true;
  return mask;
}

Mat stack(const Mat& a, const Mat& b) {
  Mat s(a.rows() + b.rows(), a.cols());
  s << a, b;
  return s;
}

}  // namespace

Mat left_action_matrix(const ModuleSpec& e, const ModuleSpec& f, const Mat& T) {
  if (T.rows() != f.rows() || T.cols() != e.rows()) throw Error(Errc::DescriptorMismatch, "operator shape mismatch");
  Mat full = full_left_image(e, T);
  Mat out(f.dim(), e.dim());
  for (int d = 0; d < e.dim(); ++d) {
    Mat y = Eigen::Map<const Mat>(full.col(d).data(), f.rows(), f.algebra.size());
    out.col(d) = to_coords(f, y);
  }
  return out;
}

GraphOperator graph_of(const ModuleSpec& e, const ModuleSpec& f, const Mat& T, double tol) {
  if (!(e.algebra == f.algebra)) throw Error(Errc::DescriptorMismatch, "graph across different algebras");
  if (T.rows() != f.rows() || T.cols() != e.rows()) throw Error(Errc::DescriptorMismatch, "operator shape mismatch");
  Mat full = full_left_image(e, T);
  const auto mask = allowed_mask(f);
  Eigen::Index nout = 0;
  for (bool b : mask) nout += !b;
  Mat out(nout, e.dim());
  Eigen::Index k = 0;
  for (std::size_t r = 0; r < mask.size(); ++r)
    if (!mask[r]) out.row(k++) = full.row(Eigen::Index(r));
  Mat D = nout ? null_space(out, tol) : Mat(Mat::Identity(e.dim(), e.dim()));
  Mat inside = left_action_matrix(e, f, T);
  ModuleSpec ef = direct_sum(e, f);
  return {e, f, GraphSubspace{span_coords(ef, stack(D, inside * D), tol)}};
}

GraphOperator from_quotient(const ModuleSpec& e, const ModuleSpec& f, const Mat& a, const Mat& b, double tol) {
  if (a.rows() != e.dim() || a.cols() != e.dim() || b.rows() != f.dim() || b.cols() != e.dim())
    throw Error(Errc::DescriptorMismatch, "quotient pair shape mismatch");
  Mat ka = null_space(a, tol);
  if (ka.cols() && (b * ka).norm() > std::sqrt(tol))
    throw Error(Errc::InvalidInput, "quotient pair violates ker(a) in ker(b)");
  return {e, f, QuotientPair{a, b}};
}

GraphOperator to_graph_subspace(const GraphOperator& t, double tol) {
  if (t.is_graph_subspace()) return t;
  if (const auto* q = std::get_if<QuotientPair>(&t.rep)) {
    ModuleSpec ef = direct_sum(t.source, t.target);
    return {t.source, t.target, GraphSubspace{span_coords(ef, stack(q->a, q->b), tol)}};
  }
  throw Error(Errc::DescriptorMismatch, "symbol operators have no finite graph");
}

Submodule domain_of(const GraphOperator& t0, double tol) {
  GraphOperator t = to_graph_subspace(t0, tol);
  const Mat& q = t.graph().basis;
  return {t.source, orth(q.topRows(t.source.dim()), tol)};
}

Submodule range_of(const GraphOperator& t0, double tol) {
  GraphOperator t = to_graph_subspace(t0, tol);
  const Mat& q = t.graph().basis;
  return {t.target, orth(q.bottomRows(t.target.dim()), tol)};
}

double graph_angle(const GraphOperator& t0) {
  GraphOperator t = to_graph_subspace(t0);
  const Mat& q = t.graph().basis;
  if (q.cols() == 0) return std::numbers::pi / 2;
  // for orthonormal [Q1; Q2] the sines of the angles to 0 (+) F are the singular values of Q1
  return std::asin(std::min(1.0, min_singular_value(q.topRows(t.source.dim()))));
}

bool is_graph(const GraphOperator& t, const Config& cfg) { return graph_angle(t) > cfg.graph_angle_tol; }

Mat action_matrix(const GraphOperator& t0, double tol) {
  GraphOperator t = to_graph_subspace(t0, tol);
  const Mat& q = t.graph().basis;
  if (q.cols() == 0) return Mat::Zero(t.target.dim(), t.source.dim());
  Mat q1 = q.topRows(t.source.dim()), q2 = q.bottomRows(t.target.dim());
  Eigen::JacobiSVD<Mat> svd(q1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol);
  // t (Q1 c) = Q2 c  =>  T = Q2 Q1^+
  Mat pinv = svd.solve(Mat::Identity(q1.rows(), q1.rows()));
  return q2 * pinv;
}

GraphOperator adjoint_graph(const GraphOperator& t0, const Config& cfg) {
  GraphOperator t = to_graph_subspace(t0, cfg.rank_tol);
  if (!is_essential(domain_of(t, cfg.rank_tol), cfg.rank_tol))
    throw Error(Errc::NotEssentialDomain, "Def(t) has a nonzero orthogonal complement");
  Submodule perp = orthogonal_complement(t.graph(), cfg.rank_tol);
  const int de = t.source.dim(), df = t.target.dim();
  // v(x, y) = (-y, x) maps E (+) F onto F (+) E
  Mat w(df + de, perp.basis.cols());
  w << -perp.basis.bottomRows(df), perp.basis.topRows(de);
  GraphOperator adj{t.target, t.source, GraphSubspace{{direct_sum(t.target, t.source), w}}};
  if (!is_graph(adj, cfg))
    throw Error(Errc::NotEssentialDomain, "v Graph(t)^perp is not a graph: t^* would be multivalued");
  return adj;
}

GraphOperator restrict_graph(const GraphOperator& t0, const ModuleSpec& e, const ModuleSpec& f, double tol) {
  GraphOperator t = to_graph_subspace(t0, tol);
  // embed coordinates of the smaller pattern into the ambient ones
  auto embedding = [](const ModuleSpec& small, const ModuleSpec& big) {
    Mat s = Mat::Zero(big.dim(), small.dim());
    for (int d = 0; d < small.dim(); ++d) {
      Vec v = Vec::Zero(small.dim());
      v(d) = 1.0;
      Mat x = from_coords(small, v);
      if (!in_module(big, x)) throw Error(Errc::DescriptorMismatch, "restriction target is not a sub-pattern");
      s.col(d) = to_coords(big, x);
    }
    return s;
  };
  Mat se = embedding(e, t.source), sf = embedding(f, t.target);
  Mat s = Mat::Zero(se.rows() + sf.rows(), se.cols() + sf.cols());
  s.topLeftCorner(se.rows(), se.cols()) = se;
  s.bottomRightCorner(sf.rows(), sf.cols()) = sf;
  Mat inter = intersect_subspaces(t.graph().basis, s, tol);
  Mat local = s.adjoint() * inter;
  return {e, f, GraphSubspace{span_coords(direct_sum(e, f), local, tol)}};
}

GraphOperator compose(const GraphOperator& s0, const GraphOperator& t0, double tol) {
  GraphOperator s = to_graph_subspace(s0, tol), t = to_graph_subspace(t0, tol);
  if (!(t.target == s.source)) throw Error(Errc::DescriptorMismatch, "composition of incompatible operators");
  const Mat& q = t.graph().basis;
  const Mat& p = s.graph().basis;
  const int de = t.source.dim(), df = t.target.dim(), dg = s.target.dim();
  Mat q1 = q.topRows(de), q2 = q.bottomRows(df);
  Mat p1 = p.topRows(df), p2 = p.bottomRows(dg);
  Mat m(df, q.cols() + p.cols());
  m << q2, -p1;
  Mat ns = null_space(m, tol);
  Mat g = stack(q1 * ns.topRows(q.cols()), p2 * ns.bottomRows(p.cols()));
  return {t.source, s.target, GraphSubspace{span_coords(direct_sum(t.source, s.target), g, tol)}};
}

Mat projection_onto(const Submodule& G, double tol) {
  if (!is_orthogonally_closed(G, tol)) throw Error(Errc::NotOrthogonallyClosed, "G differs from its double complement");
  Mat q = orth(G.basis, tol);
  return q * q.adjoint();
}

RegularityVerdict is_graph_regular(const GraphOperator& t0, const Config& cfg) {
  RegularityVerdict v;
  if (const auto* so = std::get_if<SymbolOp>(&t0.rep)) {
    PiecewiseSymbol m = so->m.verified() ? so->m : verify_declarations(so->m, cfg);
    RegularityReport r = regularity_report(m, cfg);
    v.essentially_defined = r.essentially_defined;
    v.orthogonally_closed = r.orthogonally_closed;
    v.range_one_plus_tstar_t = v.range_one_plus_t_tstar = r.graph_regular;
    v.graph_regular = r.graph_regular;
    v.regular = r.regular;
    v.diagnostics = "delegated to the symbol classifier";
    return v;
  }
  const double tol = cfg.rank_tol;
  GraphOperator t = to_graph_subspace(t0, tol);
  Submodule dom = domain_of(t, tol);
  v.essentially_defined = is_essential(dom, tol);
  v.orthogonally_closed = is_orthogonally_closed(t.graph(), tol);
  if (!v.essentially_defined) {
    v.diagnostics = "Def(t) is not essential";
    return v;
  }
  GraphOperator ts = adjoint_graph(t, cfg);
  auto one_plus_range_full = [&](const GraphOperator& prod, int d) {
    const Mat& h = prod.graph().basis;
    Mat img = h.topRows(d) + h.bottomRows(d);
    return numerical_rank(img, tol) == d;
  };
  v.range_one_plus_tstar_t = one_plus_range_full(compose(ts, t, tol), t.source.dim());
  v.range_one_plus_t_tstar = one_plus_range_full(compose(t, ts, tol), t.target.dim());
  v.graph_regular = v.orthogonally_closed && v.range_one_plus_tstar_t && v.range_one_plus_t_tstar;
  const bool dense = dom.dimension() == t.source.dim();
  const bool dense_adj = domain_of(ts, tol).dimension() == t.target.dim();
  v.regular = v.graph_regular && dense && dense_adj;
  v.diagnostics = "dim Def(t) = " + std::to_string(dom.dimension()) + " of " + std::to_string(t.source.dim());
  return v;
}

}  // namespace grreg
