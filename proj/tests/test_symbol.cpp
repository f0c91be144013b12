#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "grreg/error.hpp"
#include "grreg/symbol.hpp"

using namespace grreg;

namespace {

const Config cfg;

PiecewiseSymbol on01(const std::string& e, std::vector<Declaration> d = {}) {
  return PiecewiseSymbol::uniform(DomainSpec::interval(0, 1, {0.0}), Expr::parse(e), std::move(d));
}
PiecewiseSymbol on01_smooth(const std::string& e) {
  return PiecewiseSymbol::uniform(DomainSpec::interval(0, 1), Expr::parse(e));
}
PiecewiseSymbol one_over_x() {
  return PiecewiseSymbol::uniform(DomainSpec::real_line({0.0}), Expr::parse("1/x"),
                                  {{Location::at(0), PointClass::RegInf, {}}});
}
Declaration decl(PointClass c, std::optional<cd> lim = {}) { return {Location::at(0), c, lim}; }

}  // namespace

TEST_SUITE("symbol") {
  TEST_CASE("detector on the reference singularities") {
    CHECK(detect_class(one_over_x(), Location::at(0), cfg).cls == PointClass::RegInf);
    CHECK(detect_class(on01("exp(i/x)"), Location::at(0), cfg).cls == PointClass::SingSupp);
    const Detection d = detect_class(on01("x*exp(i/x)"), Location::at(0), cfg);
    CHECK(d.cls == PointClass::RegB);
    CHECK(std::abs(d.limit) < 1e-6);
    const Detection s = detect_class(on01("sin(x)/x"), Location::at(0), cfg);
    CHECK(s.cls == PointClass::RegB);
    CHECK(std::abs(s.limit - 1.0) < 1e-6);
  }

  TEST_CASE("declare then verify") {
    CHECK_NOTHROW(verify_declarations(on01("exp(i/x)", {decl(PointClass::SingSupp)}), cfg));
    CHECK_THROWS_AS(classify_point(on01("exp(i/x)"), decl(PointClass::RegB), cfg), Error);
    try {
      verify_declarations(on01("1/x", {decl(PointClass::RegB, cd(0.0))}), cfg);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DeclarationMismatch);
    }
    try {
      verify_declarations(on01("x*exp(i/x)", {decl(PointClass::RegB, cd(1.0))}), cfg);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DeclarationMismatch);
    }
    try {
      verify_declarations(on01("1/x"), cfg);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnverifiedDeclaration);
    }
    try {
      regularity_report(on01("1/x", {decl(PointClass::RegInf)}), cfg);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnverifiedDeclaration);
    }
  }

  TEST_CASE("malformed symbols are input errors") {
    CHECK_THROWS_AS(PiecewiseSymbol(DomainSpec::interval(0, 1), {}), Error);
    CHECK_THROWS_AS(PiecewiseSymbol(DomainSpec::interval(0, 1), {{0, 0.5, Expr::parse("x")}}), Error);
    CHECK_THROWS_AS(PiecewiseSymbol::from_json(nlohmann::json{{"pieces", nlohmann::json::array()}}), Error);
    CHECK_THROWS_AS(on01("x", {{Location::at(0.5), PointClass::RegB, {}}}), Error);
  }

  TEST_CASE("regularity verdicts") {
    const RegularityReport r = regularity_report(verify_declarations(one_over_x(), cfg), cfg);
    CHECK(r.graph_regular);
    CHECK_FALSE(r.regular);
    REQUIRE(r.a_symbol);
    // a = 1/(1+x^-2) = x^2/(1+x^2), extended by 0 at the pole
    for (double x : {-3.0, -0.2, 0.7, 5.0}) CHECK(std::abs(r.a_symbol->eval(x) - x * x / (1 + x * x)) < 1e-12);
    CHECK(std::abs(r.a_symbol->eval(0.0)) < 1e-15);
    CHECK(std::abs(r.b_symbol->eval(0.0)) < 1e-15);

    const RegularityReport e = regularity_report(verify_declarations(on01("exp(i/x)", {decl(PointClass::SingSupp)}), cfg), cfg);
    CHECK_FALSE(e.graph_regular);
    CHECK_FALSE(e.a_symbol);
    CHECK(e.essentially_defined);

    const RegularityReport id = regularity_report(
        verify_declarations(PiecewiseSymbol::uniform(DomainSpec::real_line(), Expr::parse("x")), cfg), cfg);
    CHECK(id.regular);
    CHECK(id.graph_regular);
  }

  TEST_CASE("property: regular implies graph regular, graph regular iff no SingSupp") {
    struct Item {
      const char* e;
      PointClass c;
    };
    const Item items[] = {{"1/x", PointClass::RegInf},         {"exp(i/x)", PointClass::SingSupp},
                          {"x*exp(i/x)", PointClass::RegB},    {"exp(i/x)/x", PointClass::RegInf},
                          {"sin(1/x)", PointClass::SingSupp},  {"1/x^2", PointClass::RegInf},
                          {"x^2*cos(1/x)", PointClass::RegB},  {"(1+x)/x", PointClass::RegInf}};
    for (const Item& it : items) {
      const RegularityReport r = regularity_report(verify_declarations(on01(it.e, {decl(it.c)}), cfg), cfg);
      CHECK_MESSAGE((!r.regular || r.graph_regular), it.e);
      CHECK_MESSAGE(r.graph_regular == (it.c != PointClass::SingSupp), it.e);
      CHECK_MESSAGE(r.essentially_defined == r.reg_dense, it.e);
      CHECK_MESSAGE(r.graph_regular == bool(r.a_symbol), it.e);
    }
  }

  TEST_CASE("property: |b|^2 = a - a^2 on the sample grid for graph regular symbols") {
    for (const auto& m : {verify_declarations(one_over_x(), cfg),
                          verify_declarations(on01("exp(i/x)/x", {decl(PointClass::RegInf)}), cfg),
                          verify_declarations(on01("x*exp(-i/x)", {decl(PointClass::RegB, cd(0.0))}), cfg)}) {
      const RegularityReport r = regularity_report(m, cfg);
      REQUIRE(r.graph_regular);
      const auto xs = sample_grid(m.domain(), 10000, cfg.window_R);
      double worst = 0;
      for (double x : xs) {
        const cd a = r.a_symbol->eval(x), b = r.b_symbol->eval(x);
        worst = std::max(worst, std::abs(std::norm(b) - (a - a * a)));
        worst = std::max(worst, std::abs(std::conj(b) * b - (a - a * a)));
      }
      CHECK(worst < 1e-9);
    }
  }

  TEST_CASE("property: <t_m f, g> = <f, t_conj(m) g> for bumps inside reg") {
    Rng rng(5);
    const PiecewiseSymbol m = verify_declarations(on01("exp(i/x)/x", {decl(PointClass::RegInf)}), cfg);
    for (int k = 0; k < 20; ++k) {
      const double c1 = rng.uniform(0.2, 0.8), c2 = rng.uniform(0.2, 0.8), w = 0.1;
      auto bump = [&](double c, double x) { return std::max(0.0, 1 - std::pow((x - c) / w, 2)); };
      const cd amp = rng.cnormal();
      double worst = 0;
      for (double x : sample_grid(m.domain(), 2000, cfg.window_R)) {
        const cd f = amp * bump(c1, x), g = bump(c2, x);
        const cd lhs = std::conj(m.eval(x) * f) * g, rhs = std::conj(f) * (std::conj(m.eval(x)) * g);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      CHECK(worst < 1e-9);
    }
  }

  TEST_CASE("hat extension") {
    const PiecewiseSymbol m = verify_declarations(on01("x*exp(i/x)", {decl(PointClass::RegB, cd(0.0))}), cfg);
    const PiecewiseSymbol h = hat_extension(m);
    CHECK(h.domain().punctures.empty());
    CHECK(std::abs(h.eval(0.0)) < 1e-15);
    const PiecewiseSymbol hh = hat_extension(h);
    CHECK(hh.to_json() == h.to_json());
    const PiecewiseSymbol p = verify_declarations(one_over_x(), cfg);
    const PiecewiseSymbol ph = hat_extension(p);
    CHECK(ph.domain().punctures == std::vector<double>{0.0});
    CHECK(detect_class(ph, Location::at(0), cfg).cls == PointClass::RegInf);
    CHECK(hat_extension(ph).to_json() == ph.to_json());
  }

  TEST_CASE("equivalence") {
    const PiecewiseSymbol m = verify_declarations(on01("x*exp(i/x)", {decl(PointClass::RegB, cd(0.0))}), cfg);
    CHECK(symbol_equivalent(m, hat_extension(m), cfg));
    // a finite value attached at a pole does not change the operator
    PiecewiseSymbol p(DomainSpec::real_line({0.0}),
                      {{-INFINITY, 0, Expr::parse("1/x")}, {0, INFINITY, Expr::parse("1/x")}, {0, 0, Expr::parse("7")}},
                      {{Location::at(0), PointClass::RegInf, {}}});
    CHECK(symbol_equivalent(one_over_x(), p, cfg));
    CHECK_FALSE(symbol_equivalent(on01_smooth("x"), on01_smooth("x+1"), cfg));
  }

  TEST_CASE("domain and range membership") {
    const PiecewiseSymbol m = verify_declarations(on01("exp(i/x)/x", {decl(PointClass::RegInf)}), cfg);
    const PiecewiseSymbol f = on01("x*exp(-i/x)", {decl(PointClass::RegB, cd(0.0))});
    const PiecewiseSymbol mbar = m.conj().with_declarations(m.declarations());
    CHECK(domain_membership(m, f, cfg));
    CHECK_FALSE(domain_membership(mbar, f, cfg));
    CHECK(domain_membership(on01_smooth("x"), on01_smooth("cos(x)"), cfg));

    const PiecewiseSymbol e = on01("exp(i/x)", {decl(PointClass::SingSupp)});
    CHECK_FALSE(range_membership_one_plus_tt(e, on01_smooth("1"), cfg));
    CHECK(range_membership_one_plus_tt(e, on01_smooth("x"), cfg));
    CHECK(range_membership_one_plus_tt(verify_declarations(one_over_x(), cfg),
                                       PiecewiseSymbol::uniform(DomainSpec::real_line(), Expr::parse("1/(1+x^2)")), cfg));
  }

  TEST_CASE("json round trip") {
    const PiecewiseSymbol m = on01("exp(i/x)/x", {decl(PointClass::RegInf)});
    const PiecewiseSymbol back = PiecewiseSymbol::from_json(m.to_json());
    CHECK(back.to_json() == m.to_json());
  }
}
