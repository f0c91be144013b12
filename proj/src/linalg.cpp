#include "grreg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace grreg {

double opnorm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

Mat psd_pow(const Mat& a, double p, double clamp) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  RVec ev = es.eigenvalues();
  RVec f(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double l = ev(i);
    if (l < 0 && l > -clamp) l = 0;
    f(i) = l == 0 ? (p == 0 ? 1.0 : 0.0) : (l < 0 ? -std::pow(-l, p) : std::pow(l, p));
  }
  return es.eigenvectors() * f.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat psd_sqrt(const Mat& a, double clamp) { return psd_pow(a, 0.5, clamp); }

// Rank decisions use an absolute threshold scaled by max(1, sigma_max):
// module computations mix unit-norm bases with operator entries of size O(1).
static double rank_cut(const RVec& s, double tol) {
  double smax = s.size() ? s(0) : 0.0;
  return tol * std::max(1.0, smax);
}

Eigen::Index numerical_rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const RVec& s = svd.singularValues();
  double cut = rank_cut(s, tol);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

Mat orth(const Mat& a, double tol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  double cut = rank_cut(s, tol);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  double cut = rank_cut(s, tol);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

RVec principal_angles(const Mat& q1, const Mat& q2) {
  if (q1.cols() == 0 || q2.cols() == 0) return RVec(0);
  Eigen::JacobiSVD<Mat> svd(q1.adjoint() * q2);
  RVec c = svd.singularValues();
  RVec ang(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) ang(i) = std::acos(std::clamp(c(i), -1.0, 1.0));
  std::sort(ang.data(), ang.data() + ang.size());
  return ang;
}

bool contains_subspace(const Mat& outer, const Mat& inner, double tol) {
  if (inner.cols() == 0) return true;
  if (outer.cols() == 0) return inner.norm() <= tol;
  Mat res = inner - outer * (outer.adjoint() * inner);
  return res.norm() <= tol * std::max<double>(1.0, std::sqrt(double(inner.cols())));
}

bool same_subspace(const Mat& q1, const Mat& q2, double tol) {
  return q1.cols() == q2.cols() && contains_subspace(q1, q2, tol) && contains_subspace(q2, q1, tol);
}

Mat intersect_subspaces(const Mat& q1, const Mat& q2, double tol) {
  // x = Q1 u = Q2 w  <=>  [Q1 -Q2] (u; w) = 0
  if (q1.cols() == 0 || q2.cols() == 0) return Mat(q1.rows(), 0);
  Mat m(q1.rows(), q1.cols() + q2.cols());
  m << q1, -q2;
  Mat ns = null_space(m, tol);
  return orth(q1 * ns.topRows(q1.cols()), tol);
}

Mat Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
  return m;
}

Mat Rng::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  // fix phases so the distribution is Haar
  for (Eigen::Index i = 0; i < n; ++i) {
    cd d = r(i, i);
    double ad = std::abs(d);
    if (ad > 0) q.col(i) *= d / ad;
  }
  return q;
}

}  // namespace grreg
