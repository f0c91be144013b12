// Central-block residuals in binary128 with exact Taylor coefficients of f and g.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <Eigen/Dense>

#include "grreg/error.hpp"
#include "grreg/toeplitz.hpp"

namespace grreg {

namespace {

using R = boost::multiprecision::float128;
using C = boost::multiprecision::complex128;
using QMat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
using QPoly = std::vector<C>;

C to_q(cd z) { return C(R(z.real()), R(z.imag())); }

C eval(const QPoly& p, const C& z) {
  C acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

QPoly derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * R(int(k)));
  return d;
}

R norm2(const C& z) { return z.real() * z.real() + z.imag() * z.imag(); }

// r refined in binary128: the roots of r are the outside roots of z^d(|p|^2+|q|^2).
QPoly refine_r(const TrigData& d) {
  const Config cfg;
  const int deg = std::max(poly_degree(d.p), poly_degree(d.q));
  QPoly P(std::size_t(2 * deg + 1), C(0));
  for (const Poly* s : {&d.p, &d.q})
    for (std::size_t j = 0; j < s->size(); ++j)
      for (std::size_t k = 0; k < s->size(); ++k)
        P[std::size_t(int(j) - int(k) + deg)] += to_q((*s)[j]) * conj(to_q((*s)[k]));
  const QPoly dP = derivative(P);
  std::vector<C> roots;
  for (cd l : (poly_degree(d.r) > 0 ? poly_roots(d.r, cfg) : std::vector<cd>{})) {
    C z = to_q(l);
    for (int it = 0; it < 12; ++it) {
      const C dz = eval(dP, z);
      if (dz == C(0)) break;
      z -= eval(P, z) / dz;
    }
    roots.push_back(z);
  }
  QPoly r{C(1)};
  for (const C& l : roots) {
    QPoly n(r.size() + 1, C(0));
    for (std::size_t k = 0; k < r.size(); ++k) {
      n[k + 1] += r[k];
      n[k] -= l * r[k];
    }
    r = n;
  }
  QPoly p, q;
  for (cd c : d.p) p.push_back(to_q(c));
  for (cd c : d.q) q.push_back(to_q(c));
  const C one(1);
  const R target = norm2(eval(p, one)) + norm2(eval(q, one));
  const R scale = sqrt(target / norm2(eval(r, one)));
  C phase(1);
  if (!q.empty() && q[0] != C(0)) {
    const C ratio = q[0] / r[0];
    phase = ratio / abs(ratio);
  }
  for (C& c : r) c *= phase * scale;
  return r;
}

// First n Taylor coefficients of num/den.
std::vector<C> series(const Poly& num, const QPoly& den, int n) {
  std::vector<C> out(std::size_t(n), C(0));
  for (int k = 0; k < n; ++k) {
    C acc = k < int(num.size()) ? to_q(num[std::size_t(k)]) : C(0);
    for (int j = 1; j <= k && j < int(den.size()); ++j) acc -= den[std::size_t(j)] * out[std::size_t(k - j)];
    out[std::size_t(k)] = acc / den[0];
  }
  return out;
}

QMat lower_toeplitz(const std::vector<C>& c, int N) {
  QMat T = QMat::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k <= j; ++k) T(j, k) = c[std::size_t(j - k)];
  return T;
}

double max_abs(const QMat& m) {
  R best(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, R(abs(m(i, j))));
  return static_cast<double>(best);
}

}  // namespace

InteriorResiduals interior_residuals_quad(const TrigData& d, int N) {
  if (N < 4) throw Error(Errc::BadParameters, "N must be at least 4");
  const QPoly r = refine_r(d);
  const QMat Tf = lower_toeplitz(series(d.q, r, N), N);
  const QMat Tg = lower_toeplitz(series(d.p, r, N), N);
  const QMat Tfs = Tf.adjoint(), Tgs = Tg.adjoint();
  const QMat A = Tf.triangularView<Eigen::Lower>() * Tfs;
  const QMat As = QMat::Identity(N, N) - Tg.triangularView<Eigen::Lower>() * Tgs;
  const QMat B = Tg.triangularView<Eigen::Lower>() * Tfs;
  const Eigen::Index lo = N / 4, h = N / 2;
  InteriorResiduals out;
  out.N = N;
  out.bb = max_abs(QMat(B.middleCols(lo, h).adjoint() * B.middleCols(lo, h)) - A.block(lo, lo, h, h) +
                   QMat(A.middleRows(lo, h) * A.middleCols(lo, h)));
  out.bbstar = max_abs(QMat(B.middleRows(lo, h) * B.middleRows(lo, h).adjoint()) - As.block(lo, lo, h, h) +
                       QMat(As.middleRows(lo, h) * As.middleCols(lo, h)));
  out.abstar = max_abs(QMat(A.middleRows(lo, h) * B.middleRows(lo, h).adjoint()) -
                       QMat(B.middleCols(lo, h).adjoint() * As.middleCols(lo, h)));
  return out;
}

}  // namespace grreg
