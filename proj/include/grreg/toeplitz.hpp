#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grreg/config.hpp"
#include "grreg/linalg.hpp"

namespace grreg {

// Polynomials as ascending coefficient lists c_0 + c_1 z + ...
using Poly = std::vector<cd>;

Poly poly_parse(const std::string& text);
Poly poly_trim(Poly p);
int poly_degree(const Poly& p);  // -1 for the zero polynomial
cd poly_eval(const Poly& p, cd z);
std::string poly_str(const Poly& p);
// Companion-matrix eigenvalues; throws DegreeTooLarge above cfg.max_degree.
std::vector<cd> poly_roots(const Poly& p, const Config& cfg);
Poly poly_from_roots(const std::vector<cd>& roots, cd lead);

// Coprimality by root separation (distance > cfg.coprime_tol between every
// root of p and every root of q).
bool coprime(const Poly& p, const Poly& q, const Config& cfg);

// r with |p|^2 + |q|^2 = |r|^2 on the circle, no zero in the closed disc, and
// q(0)/r(0) > 0. Throws NotCoprime, CircleRoot.
Poly fejer_riesz(const Poly& p, const Poly& q, const Config& cfg);

struct TrigData {
  Poly p, q, r;
  double fr_residual = 0;     // sup over circle samples of ||p|^2+|q|^2-|r|^2|
  double unit_residual = 0;   // sup of ||f|^2+|g|^2-1|
  double min_root_r = 0;      // smallest modulus of a root of r (inf if r is constant)
  cd f0{0.0};                 // f(0) = q(0)/r(0)
  bool valid = false;

  cd f(cd z) const { return poly_eval(q, z) / poly_eval(r, z); }
  cd g(cd z) const { return poly_eval(p, z) / poly_eval(r, z); }
  nlohmann::json to_json() const;
};
TrigData trig_data(const Poly& p, const Poly& q, const Config& cfg);

// T[j,k] = phihat(j-k) with Fourier coefficients from the FFT of 8N samples.
Mat toeplitz_truncation(const std::function<cd(cd)>& phi, int N);

struct ToeplitzTriple {
  Mat A, A_star, B;  // T_f T_conj(f), I - T_g T_conj(g), T_g T_conj(f)
};
ToeplitzTriple toeplitz_aab(const TrigData& d, int N);

// Max-abs entries of the three AB-axiom residuals on the central block [N/4, 3N/4).
struct InteriorResiduals {
  int N = 0;
  double bb = 0, bbstar = 0, abstar = 0;
  double max() const { return std::max(bb, std::max(bbstar, abstar)); }
};
InteriorResiduals interior_residuals(const ToeplitzTriple& t);
// The same residuals in binary128 arithmetic with exact Taylor coefficients of f and g;
// r is refined by Newton steps in binary128 first.
InteriorResiduals interior_residuals_quad(const TrigData& d, int N);

// max over k < N/2 of |B e_k - (I-S)^{-1} A e_k| for p = 1, q = 1 - z.
double inverse_shift_residual(const ToeplitzTriple& t);

enum class Affiliation { Affiliated, AssociatedOnly };
const char* affiliation_name(Affiliation a);

struct CharacterWitness {
  cd lambda;
  double f_abs2;  // |f(lambda)|^2
};
struct AffiliationVerdict {
  Affiliation verdict = Affiliation::Affiliated;
  std::vector<CharacterWitness> witnesses;
  std::vector<cd> q_roots;
  nlohmann::json to_json() const;
};
// Throws InnerRoot if q vanishes inside the disc.
AffiliationVerdict affiliation_verdict(const Poly& p, const Poly& q, const Config& cfg);

// Random coprime pair of degree <= max_deg with q zero-free in the closed disc.
std::pair<Poly, Poly> random_trig_pair(Rng& rng, int max_deg);

}  // namespace grreg
