#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "grreg/error.hpp"
#include "grreg/matrix_symbol.hpp"

using namespace grreg;
using SC = SymbolClass;

namespace {
const Config cfg;
}

TEST_SUITE("matrix_symbol") {
  TEST_CASE("entry classes") {
    const auto cls = [](const char* e, SC c) { return in_class(check_entry(Expr::parse(e), cfg), c, cfg); };
    CHECK(cls("1/(1+x^2)", SC::C0));
    CHECK(cls("exp(-x^2)", SC::C0));
    CHECK_FALSE(cls("1", SC::C0));
    CHECK(cls("1", SC::C0Unitized));
    CHECK(cls("2+1/(1+x^2)", SC::C0Unitized));
    CHECK(cls("sin(x)", SC::Cb));
    CHECK_FALSE(cls("sin(x)", SC::C0Unitized));
    // boundedness is judged on the sampled window, so linear growth stays under the cap
    CHECK(cls("x", SC::Cb));
    CHECK_FALSE(cls("x^2", SC::Cb));
    CHECK_FALSE(cls("1/x", SC::Cb));
    CHECK_FALSE(cls("1/x", SC::C0));
  }

  TEST_CASE("property: symbolic matrix algebra agrees with pointwise Eigen") {
    Rng rng(43);
    for (int k = 0; k < 50; ++k) {
      std::array<std::string, 4> ta, tb;
      for (auto& s : ta) s = gen::expr(rng, 2);
      for (auto& s : tb) s = gen::expr(rng, 2);
      const SymbolMatrix2 a = SymbolMatrix2::parse(ta), b = SymbolMatrix2::parse(tb);
      const double x = rng.uniform(-3, 3);
      const Eigen::Matrix2cd A = a.eval(x), B = b.eval(x);
      if (!A.allFinite() || !B.allFinite() || A.norm() > 1e6 || B.norm() > 1e6) continue;
      CHECK(((a * b).eval(x) - A * B).norm() <= 1e-10 * (1 + A.norm() * B.norm()));
      CHECK(((a + b).eval(x) - (A + B)).norm() <= 1e-10 * (1 + A.norm() + B.norm()));
      CHECK((a.adjoint().eval(x) - A.adjoint()).norm() <= 1e-10 * (1 + A.norm()));
      if (std::abs(A.determinant()) > 1e-3) {
        const Eigen::Matrix2cd Ai = a.inverse().eval(x);
        CHECK((Ai * A - Eigen::Matrix2cd::Identity()).norm() < 1e-6 * (1 + A.norm() * Ai.norm()));
      }
    }
  }

  TEST_CASE("nilpotent symbol: b_t carries the constant 1/2 below the diagonal") {
    const MatrixSymbolOp e = matrix_symbol_op(SymbolMatrix2::parse({"0", "0", "1", "0"}),
                                              {SC::C0, SC::C0, SC::Cb, SC::C0Unitized}, cfg);
    for (double x : {-50.0, 0.0, 3.0, 1e3}) {
      const Eigen::Matrix2cd b = e.b.eval(x), a = e.a.eval(x), as = e.a_star.eval(x);
      CHECK(std::abs(b(1, 0) - 0.5) < 1e-15);
      CHECK(std::abs(b(0, 0)) + std::abs(b(0, 1)) + std::abs(b(1, 1)) < 1e-15);
      CHECK(std::abs(a(0, 0) - 0.5) < 1e-15);
      CHECK(std::abs(a(1, 1) - 1.0) < 1e-15);
      CHECK(std::abs(as(0, 0) - 1.0) < 1e-15);
      CHECK(std::abs(as(1, 1) - 0.5) < 1e-15);
    }
    CHECK_FALSE(e.b_verdict.in_M);
    CHECK(e.b_verdict.in_LM);
    CHECK_FALSE(e.t_verdict.in_M);
  }

  TEST_CASE("upper triangular symbol: closed form of a_t*") {
    const MatrixSymbolOp e = matrix_symbol_op(SymbolMatrix2::parse({"0", "x*sqrt(1+sin(x)^2)", "0", "x*sqrt(1+cos(x)^2)"}),
                                              {SC::C0, SC::Cb, SC::C0, SC::Cb}, cfg);
    double worst = 0;
    for (double x = -40; x <= 40; x += 0.37) {
      const double f = x * std::sqrt(1 + std::sin(x) * std::sin(x)), g = x * std::sqrt(1 + std::cos(x) * std::cos(x));
      const double d = 1 + f * f + g * g;
      Eigen::Matrix2cd oracle;
      oracle << (1 + g * g) / d, -f * g / d, -f * g / d, (1 + f * f) / d;
      worst = std::max(worst, (e.a_star.eval(x) - oracle).norm());
      // a_t = (1+t*t)^-1 = diag(1, 1/(1+f^2+g^2))
      CHECK(std::abs(e.a.eval(x)(0, 0) - 1.0) < 1e-12);
      CHECK(std::abs(e.a.eval(x)(1, 1) - 1.0 / d) < 1e-12);
    }
    CHECK(worst < 1e-12);
    CHECK(e.b_verdict.in_A);
    CHECK(e.a_verdict.in_M);
    CHECK_FALSE(e.a_verdict.in_A);  // the (0,0) entry is the constant 1
    CHECK_FALSE(e.a_star_verdict.in_M);
    REQUIRE_FALSE(e.a_star_verdict.failures.empty());
  }

  TEST_CASE("declared classes are checked") {
    try {
      matrix_symbol_op(SymbolMatrix2::parse({"0", "0", "1", "0"}), {SC::C0, SC::C0, SC::C0, SC::C0Unitized}, cfg);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ClassCheckFailed);
      CHECK(std::string(e.what()).find("entry (2,1)") != std::string::npos);
    }
  }

  TEST_CASE("multiplier patterns") {
    const SymbolMatrix2 id = SymbolMatrix2::identity();
    const MultiplierVerdict v = multiplier_membership(id, cfg);
    CHECK_FALSE(v.in_A);
    CHECK(v.in_M);
    CHECK(v.in_LM);
    const MultiplierVerdict w = multiplier_membership(SymbolMatrix2::parse({"exp(-x^2)", "0", "0", "1"}), cfg);
    CHECK(w.in_A);
    const MultiplierVerdict l = multiplier_membership(SymbolMatrix2::parse({"0", "0", "cos(x)", "0"}), cfg);
    CHECK_FALSE(l.in_M);
    CHECK(l.in_LM);
  }

  TEST_CASE("grid adjoint of a bounded multiplier is the fibrewise adjoint") {
    const GridModel gm = grid_model();
    Eigen::Matrix2cd f0, f1, fi;
    f0 << 1, cd(0, 2), 3, 4;
    f1 << 0, 1, -1, 0;
    fi << 2, 0, 0, cd(0, 1);
    const Mat T = grid_operator(f0, f1, fi);
    CHECK(fibre_in_pattern(T, gm.mask_M));
    const GraphOperator ts = grid_adjoint(gm, T, cfg);
    CHECK(domain_of(ts).dimension() == gm.A.dim());
    const Mat oracle = left_action_matrix(gm.A, gm.A, T.adjoint());
    CHECK((action_matrix(ts) - oracle).norm() < 1e-9);
  }
}
