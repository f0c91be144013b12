#include "grreg/toeplitz.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "grreg/error.hpp"
#include "grreg/expr.hpp"

namespace grreg {

Poly poly_parse(const std::string& text) { return poly_trim(Expr::parse(text).polynomial()); }

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == cd(0.0)) p.pop_back();
  return p;
}

int poly_degree(const Poly& p) { return static_cast<int>(poly_trim(p).size()) - 1; }

cd poly_eval(const Poly& p, cd z) {
  cd acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::string poly_str(const Poly& p) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t k = 0; k < p.size(); ++k) os << (k ? ", " : "") << "(" << p[k].real() << "," << p[k].imag() << ")";
  os << "]";
  return os.str();
}

std::vector<cd> poly_roots(const Poly& p0, const Config& cfg) {
  Poly p = poly_trim(p0);
  if (p.empty()) throw Error(Errc::InvalidInput, "roots of the zero polynomial");
  const int d = static_cast<int>(p.size()) - 1;
  if (d > cfg.max_degree) throw Error(Errc::DegreeTooLarge, "degree " + std::to_string(d));
  if (d == 0) return {};
  Mat C = Mat::Zero(d, d);
  for (int k = 1; k < d; ++k) C(k, k - 1) = 1.0;
  for (int k = 0; k < d; ++k) C(k, d - 1) = -p[k] / p[d];
  Eigen::ComplexEigenSolver<Mat> es(C, false);
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(out.begin(), out.end(), [](cd a, cd b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b);
  });
  return out;
}

Poly poly_from_roots(const std::vector<cd>& roots, cd lead) {
  Poly p{lead};
  for (cd l : roots) {
    Poly n(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      n[k + 1] += p[k];
      n[k] -= l * p[k];
    }
    p = std::move(n);
  }
  return p;
}

bool coprime(const Poly& p0, const Poly& q0, const Config& cfg) {
  Poly p = poly_trim(p0), q = poly_trim(q0);
  if (p.empty()) return poly_degree(q) == 0;
  if (q.empty()) return poly_degree(p) == 0;
  for (cd a : poly_roots(p, cfg))
    for (cd b : poly_roots(q, cfg))
      if (std::abs(a - b) <= cfg.coprime_tol) return false;
  return true;
}

namespace {

// Coefficients of z^d (|p|^2 + |q|^2)(z) on the circle, as an ordinary polynomial of degree 2d.
Poly laurent_numerator(const Poly& p, const Poly& q, int d) {
  Poly c(2 * d + 1, 0.0);
  for (const Poly* s : {&p, &q})
    for (std::size_t j = 0; j < s->size(); ++j)
      for (std::size_t k = 0; k < s->size(); ++k)
        c[std::size_t(int(j) - int(k) + d)] += (*s)[j] * std::conj((*s)[k]);
  return c;
}

double circle_value(const Poly& p, const Poly& q, cd z) {
  return std::norm(poly_eval(p, z)) + std::norm(poly_eval(q, z));
}

}  // namespace

Poly fejer_riesz(const Poly& p0, const Poly& q0, const Config& cfg) {
  Poly p = poly_trim(p0), q = poly_trim(q0);
  if (p.empty() && q.empty()) throw Error(Errc::InvalidInput, "p and q both vanish");
  if (!coprime(p, q, cfg)) throw Error(Errc::NotCoprime, "p and q share a root");
  const int d = std::max(poly_degree(p), poly_degree(q));
  if (d > cfg.max_degree) throw Error(Errc::DegreeTooLarge, "degree " + std::to_string(d));
  const cd q00 = q.empty() ? cd(0.0) : q[0];
  if (d == 0) {
    const double m = std::sqrt(circle_value(p, q, 1.0));
    return {q00 != cd(0.0) ? m * q00 / std::abs(q00) : cd(m)};
  }
  Poly P = laurent_numerator(p, q, d);
  // zero roots of P pair with the degree drop at the top; both are removed
  std::size_t low = 0;
  while (low < P.size() && std::abs(P[low]) == 0.0) ++low;
  Poly Pr(P.begin() + std::ptrdiff_t(low), P.end());
  std::vector<cd> outside;
  for (cd l : poly_roots(Pr, cfg)) {
    if (std::abs(std::abs(l) - 1.0) < cfg.circle_root_tol)
      throw Error(Errc::CircleRoot, "|p|^2+|q|^2 vanishes near the circle at z = " +
                                        std::to_string(l.real()) + "+" + std::to_string(l.imag()) + "i");
    if (std::abs(l) > 1.0) outside.push_back(l);
  }
  if (2 * outside.size() != std::size_t(poly_degree(Pr)))
    throw Error(Errc::CircleRoot, "roots of |p|^2+|q|^2 do not pair across the circle");
  Poly r = poly_from_roots(outside, 1.0);
  const double scale = std::sqrt(circle_value(p, q, 1.0) / std::norm(poly_eval(r, 1.0)));
  const cd r0 = poly_eval(r, 0.0);
  cd phase = 1.0;
  if (q00 != cd(0.0)) phase = (q00 / r0) / std::abs(q00 / r0);
  for (cd& c : r) c *= scale * phase;
  return r;
}

nlohmann::json TrigData::to_json() const {
  auto pj = [](const Poly& x) {
    nlohmann::json j = nlohmann::json::array();
    for (cd c : x) j.push_back({c.real(), c.imag()});
    return j;
  };
  return {{"p", pj(p)},
          {"q", pj(q)},
          {"r", pj(r)},
          {"fr_residual", fr_residual},
          {"unit_residual", unit_residual},
          {"min_root_r", std::isfinite(min_root_r) ? nlohmann::json(min_root_r) : nlohmann::json("inf")},
          {"f0", {f0.real(), f0.imag()}},
          {"valid", valid}};
}

TrigData trig_data(const Poly& p, const Poly& q, const Config& cfg) {
  TrigData d;
  d.p = poly_trim(p);
  d.q = poly_trim(q);
  d.r = fejer_riesz(d.p, d.q, cfg);
  const int n = cfg.circle_samples;
  for (int k = 0; k < n; ++k) {
    const cd z = std::polar(1.0, 2 * std::numbers::pi * k / n);
    const double lhs = circle_value(d.p, d.q, z);
    d.fr_residual = std::max(d.fr_residual, std::abs(lhs - std::norm(poly_eval(d.r, z))));
    d.unit_residual = std::max(d.unit_residual, std::abs(std::norm(d.f(z)) + std::norm(d.g(z)) - 1.0));
  }
  d.min_root_r = std::numeric_limits<double>::infinity();
  for (cd l : poly_roots(d.r, cfg)) d.min_root_r = std::min(d.min_root_r, std::abs(l));
  d.f0 = d.f(0.0);
  d.valid = d.fr_residual < cfg.fr_tol && d.unit_residual < cfg.fr_tol && d.min_root_r > 1 + cfg.inner_root_tol &&
            d.f0.real() > 0 && std::abs(d.f0.imag()) <= 1e-12 * std::abs(d.f0);
  return d;
}

Mat toeplitz_truncation(const std::function<cd(cd)>& phi, int N) {
  const int M = 8 * N;
  std::vector<cd> v(M), hat;
  for (int j = 0; j < M; ++j) v[j] = phi(std::polar(1.0, 2 * std::numbers::pi * j / M));
  Eigen::FFT<double> fft;
  fft.fwd(hat, v);
  Mat T(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) T(j, k) = hat[std::size_t((j - k + M) % M)] / double(M);
  return T;
}

ToeplitzTriple toeplitz_aab(const TrigData& d, int N) {
  if (N < 2) throw Error(Errc::BadParameters, "N must be at least 2");
  Mat Tf = toeplitz_truncation([&](cd z) { return d.f(z); }, N);
  Mat Tfb = toeplitz_truncation([&](cd z) { return std::conj(d.f(z)); }, N);
  Mat Tg = toeplitz_truncation([&](cd z) { return d.g(z); }, N);
  Mat Tgb = toeplitz_truncation([&](cd z) { return std::conj(d.g(z)); }, N);
  ToeplitzTriple t;
  t.A = Tf * Tfb;
  t.A_star = Mat::Identity(N, N) - Tg * Tgb;
  t.B = Tg * Tfb;
  return t;
}

InteriorResiduals interior_residuals(const ToeplitzTriple& t) {
  const Eigen::Index N = t.A.rows(), lo = N / 4, h = N / 2;
  const Mat &A = t.A, &As = t.A_star, &B = t.B;
  InteriorResiduals r;
  r.N = int(N);
  Mat bb = B.middleCols(lo, h).adjoint() * B.middleCols(lo, h) - A.block(lo, lo, h, h) +
           A.middleRows(lo, h) * A.middleCols(lo, h);
  Mat bbs = B.middleRows(lo, h) * B.middleRows(lo, h).adjoint() - As.block(lo, lo, h, h) +
            As.middleRows(lo, h) * As.middleCols(lo, h);
  Mat abs_ = A.middleRows(lo, h) * B.middleRows(lo, h).adjoint() - B.middleCols(lo, h).adjoint() * As.middleCols(lo, h);
  r.bb = bb.cwiseAbs().maxCoeff();
  r.bbstar = bbs.cwiseAbs().maxCoeff();
  r.abstar = abs_.cwiseAbs().maxCoeff();
  return r;
}

double inverse_shift_residual(const ToeplitzTriple& t) {
  const Eigen::Index N = t.A.rows();
  Mat L = Mat::Zero(N, N);  // (I - S)^{-1}: ones on and below the diagonal
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index k = 0; k <= j; ++k) L(j, k) = 1.0;
  return (t.B.leftCols(N / 2) - L * t.A.leftCols(N / 2)).cwiseAbs().maxCoeff();
}

const char* affiliation_name(Affiliation a) {
  return a == Affiliation::Affiliated ? "Affiliated" : "AssociatedOnly";
}

nlohmann::json AffiliationVerdict::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& c : witnesses) w.push_back({{"lambda", {c.lambda.real(), c.lambda.imag()}}, {"f_abs2", c.f_abs2}});
  nlohmann::json roots = nlohmann::json::array();
  for (cd l : q_roots) roots.push_back({l.real(), l.imag()});
  return {{"verdict", affiliation_name(verdict)}, {"witnesses", w}, {"q_roots", roots}};
}

AffiliationVerdict affiliation_verdict(const Poly& p, const Poly& q0, const Config& cfg) {
  Poly q = poly_trim(q0);
  if (q.empty()) throw Error(Errc::InvalidInput, "q is the zero polynomial");
  AffiliationVerdict v;
  v.q_roots = poly_roots(q, cfg);
  for (cd l : v.q_roots)
    if (std::abs(l) < 1.0 - cfg.inner_root_tol)
      throw Error(Errc::InnerRoot, "q has a zero of modulus " + std::to_string(std::abs(l)));
  Poly r = fejer_riesz(p, q, cfg);
  for (cd l : v.q_roots) {
    if (std::abs(std::abs(l) - 1.0) > cfg.circle_root_tol) continue;
    v.verdict = Affiliation::AssociatedOnly;
    v.witnesses.push_back({l, std::norm(poly_eval(q, l) / poly_eval(r, l))});
  }
  return v;
}

std::pair<Poly, Poly> random_trig_pair(Rng& rng, int max_deg) {
  const Config cfg;
  for (;;) {
    const int dq = rng.integer(0, max_deg), dp = rng.integer(0, max_deg);
    std::vector<cd> roots;
    for (int k = 0; k < dq; ++k) roots.push_back(std::polar(rng.uniform(1.2, 3.0), rng.uniform(0.0, 2 * std::numbers::pi)));
    Poly q = poly_from_roots(roots, 1.0);
    // normalise q(0) = 1 so the instance scale is O(1)
    const cd q0 = q[0];
    for (cd& c : q) c /= q0;
    Poly p(std::size_t(dp + 1));
    for (cd& c : p) c = rng.cnormal();
    if (coprime(p, q, cfg)) return {p, q};
  }
}

}  // namespace grreg
