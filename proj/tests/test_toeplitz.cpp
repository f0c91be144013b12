#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "grreg/error.hpp"
#include "grreg/toeplitz.hpp"

using namespace grreg;

namespace {

const Config cfg;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::InvalidInput;
}

}  // namespace

TEST_SUITE("toeplitz") {
  TEST_CASE("polynomial parsing and roots") {
    const Poly p = poly_parse("2 - 3*z + z^2");
    REQUIRE(poly_degree(p) == 2);
    std::vector<cd> r = poly_roots(p, cfg);
    std::sort(r.begin(), r.end(), [](cd a, cd b) { return a.real() < b.real(); });
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(r[1] - 2.0) < 1e-12);
    CHECK(poly_degree(poly_trim({1.0, 0.0, 0.0})) == 0);
    CHECK(poly_degree(poly_trim({0.0})) == -1);
    Rng rng(201);
    for (int k = 0; k < 50; ++k) {
      const int d = rng.integer(1, 10);
      Poly q(std::size_t(d + 1));
      for (cd& c : q) c = rng.cnormal();
      const Poly back = poly_from_roots(poly_roots(q, cfg), q.back());
      for (int j = 0; j <= d; ++j) CHECK(std::abs(back[j] - q[j]) < 1e-8 * (1 + std::abs(q[j])));
    }
    Poly big(26, 1.0);
    CHECK(code_of([&] { poly_roots(big, cfg); }) == Errc::DegreeTooLarge);
    CHECK(code_of([&] { fejer_riesz(big, {1.0}, cfg); }) == Errc::DegreeTooLarge);
  }

  TEST_CASE("Fejer-Riesz on the shift example against the quadratic solution") {
    // |1|^2 + |1-z|^2 = 3 - 2 cos, and c^2 (1 + b^2 - 2 b cos) matches when b + 1/b = 3
    const double beta = (3 - std::sqrt(5.0)) / 2, c = 1 / std::sqrt(beta);
    const Poly r = fejer_riesz({1.0}, {1.0, -1.0}, cfg);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - c) < 1e-12);
    CHECK(std::abs(r[1] + c * beta) < 1e-12);
    CHECK(std::abs(c - 1.6180339887498949) < 1e-12);
    CHECK(std::abs(beta - 0.3819660112501051) < 1e-12);
    const Poly one = fejer_riesz({0.0}, {1.0}, cfg);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0] - 1.0) < 1e-15);
  }

  TEST_CASE("Fejer-Riesz errors") {
    CHECK(code_of([] { fejer_riesz({1.0, -0.5}, {2.0, -1.0}, cfg); }) == Errc::NotCoprime);
    CHECK(code_of([] { fejer_riesz({1.0, -1.0}, {1.0, -1.0 / (1 + 1e-7)}, cfg); }) == Errc::CircleRoot);
    CHECK(code_of([] { fejer_riesz({0.0}, {0.0}, cfg); }) == Errc::InvalidInput);
    CHECK_FALSE(coprime({1.0, -1.0}, {1.0, -1.0 / (1 + 3e-8)}, cfg));
    CHECK(coprime({1.0, -1.0}, {1.0, -1.0 / (1 + 1e-5)}, cfg));
  }

  TEST_CASE("property: random pairs give valid trigonometric data") {
    Rng rng(211);
    for (int k = 0; k < 60; ++k) {
      const auto [p, q] = random_trig_pair(rng, 6);
      const TrigData d = trig_data(p, q, cfg);
      CHECK(d.valid);
      CHECK(d.fr_residual < cfg.fr_tol);
      CHECK(d.unit_residual < 1e-10);
      CHECK(d.min_root_r > 1.0);
      CHECK(std::abs(d.f0.imag()) < 1e-12);
      CHECK(d.f0.real() > 0);
      // |f|^2 + |g|^2 = 1 at independent circle points
      for (int j = 0; j < 7; ++j) {
        const cd z = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
        CHECK(std::abs(std::norm(d.f(z)) + std::norm(d.g(z)) - 1.0) < 1e-10);
      }
      CHECK(affiliation_verdict(p, q, cfg).verdict == Affiliation::Affiliated);
    }
  }

  TEST_CASE("truncations of simple symbols") {
    const int N = 16;
    const Mat T1 = toeplitz_truncation([](cd) { return cd(1.0); }, N);
    CHECK((T1 - Mat::Identity(N, N)).norm() < 1e-13);
    Mat S = Mat::Zero(N, N);
    for (int j = 1; j < N; ++j) S(j, j - 1) = 1;
    const Mat Tz = toeplitz_truncation([](cd z) { return z; }, N);
    CHECK((Tz - S).norm() < 1e-13);
    const Mat T1z = toeplitz_truncation([](cd z) { return 1.0 - z; }, N);
    CHECK((T1z - (Mat::Identity(N, N) - S)).norm() < 1e-13);
    const Mat Tzb = toeplitz_truncation([](cd z) { return std::conj(z); }, N);
    CHECK((Tzb - S.transpose()).norm() < 1e-13);
  }

  TEST_CASE("affiliation verdicts") {
    const AffiliationVerdict shift = affiliation_verdict({1.0}, {1.0, -1.0}, cfg);
    CHECK(shift.verdict == Affiliation::AssociatedOnly);
    REQUIRE(shift.witnesses.size() == 1);
    CHECK(std::abs(shift.witnesses[0].lambda - 1.0) < 1e-12);
    CHECK(shift.witnesses[0].f_abs2 < 1e-12);
    CHECK(affiliation_verdict({1.0}, {1.0, -0.5}, cfg).verdict == Affiliation::Affiliated);
    // stability under moving the root of q across the circle
    CHECK(affiliation_verdict({1.0}, {1.0, -1.0 / (1 + 1e-3)}, cfg).verdict == Affiliation::Affiliated);
    CHECK(code_of([] { affiliation_verdict({1.0}, {1.0, -1.0 / (1 - 1e-3)}, cfg); }) == Errc::InnerRoot);
    CHECK(code_of([] { affiliation_verdict({1.0}, {-0.5, 1.0}, cfg); }) == Errc::InnerRoot);
  }

  TEST_CASE("Toeplitz triple on the shift example") {
    const TrigData d = trig_data({1.0}, {1.0, -1.0}, cfg);
    const ToeplitzTriple t = toeplitz_aab(d, 128);
    CHECK(inverse_shift_residual(t) < 1e-12);
    CHECK(interior_residuals(t).max() < 1e-12);
    const InteriorResiduals q = interior_residuals_quad(d, 128);
    CHECK(q.max() < 1e-20);
    CHECK((t.A - t.A.adjoint()).norm() < 1e-12);
    CHECK((t.A_star - t.A_star.adjoint()).norm() < 1e-12);
  }

  TEST_CASE("property: interior residuals decay with N at the rate set by the roots of r") {
    Rng rng(223);
    for (int k = 0; k < 8; ++k) {
      const auto [p, q] = random_trig_pair(rng, 3);
      const TrigData d = trig_data(p, q, cfg);
      const double r64 = interior_residuals(toeplitz_aab(d, 64)).max();
      const double r256 = interior_residuals(toeplitz_aab(d, 256)).max();
      CHECK(r256 <= r64 + 1e-14);
      // the coefficients of 1/r decay like rho^-n; the central block sits N/4 from the edge
      if (std::pow(d.min_root_r, 64.0) > 1e14) CHECK(r256 < 1e-9);
    }
  }
}
