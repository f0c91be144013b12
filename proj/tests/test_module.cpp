#include <doctest.h>

#include "gen.hpp"
#include "grreg/error.hpp"
#include "grreg/matrix_symbol.hpp"
#include "grreg/module.hpp"
#include "grreg/transforms.hpp"

using namespace grreg;

namespace {

const Config cfg;

ModuleSpec mn(int n) { return {AlgebraDescriptor::matrix_blocks({n}), 1}; }

// Singular test operator: a random n x n matrix of rank n-1.
Mat rank_deficient(Rng& rng, int n) {
  Mat g = rng.gaussian(n, n);
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  s(n - 1) = 0;
  return svd.matrixU() * s.cast<cd>().asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace

TEST_SUITE("module") {
  TEST_CASE("descriptor sizes and coordinate round trip") {
    const ModuleSpec m{AlgebraDescriptor::matrix_blocks({2, 1}), 2};
    CHECK(m.algebra.size() == 3);
    CHECK(m.algebra.dim() == 5);
    CHECK(m.dim() == 10);
    Rng rng(3);
    const Vec c = rng.gaussian(m.dim(), 1);
    const Mat x = from_coords(m, c);
    CHECK(x.rows() == 6);
    CHECK(x.cols() == 3);
    CHECK(in_module(m, x));
    CHECK((to_coords(m, x) - c).norm() < 1e-15);
    Mat bad = x;
    bad(0, 2) = 1.0;  // off-block entry
    CHECK_FALSE(in_module(m, bad));
    CHECK_THROWS_AS(AlgebraDescriptor::matrix_blocks({0}).validate(), Error);
  }

  TEST_CASE("property: inner product is sesquilinear and conjugate symmetric") {
    Rng rng(17);
    for (int n = 1; n <= 4; ++n) {
      const ModuleSpec m{AlgebraDescriptor::matrix_blocks({n}), 2};
      for (int k = 0; k < 25; ++k) {
        const ModuleElement x{m, from_coords(m, rng.gaussian(m.dim(), 1))};
        const ModuleElement y{m, from_coords(m, rng.gaussian(m.dim(), 1))};
        const Mat a = rng.gaussian(n, n);
        const Mat xy = inner_product(x, y);
        CHECK((xy - x.value.adjoint() * y.value).norm() < 1e-12);
        CHECK((xy.adjoint() - inner_product(y, x)).norm() < 1e-12);
        const ModuleElement ya{m, y.value * a};
        CHECK((inner_product(x, ya) - xy * a).norm() < 1e-11);
        CHECK(module_norm(x) * module_norm(x) <= opnorm(x.value.adjoint() * x.value) * (1 + 1e-12) + 1e-14);
      }
    }
  }

  TEST_CASE("right ideals of M2 (+) M1") {
    const ModuleSpec m{AlgebraDescriptor::matrix_blocks({2, 1}), 1};
    Mat e11 = Mat::Zero(3, 3);
    e11(0, 0) = 1;
    const Submodule s = generate(m, {e11});
    CHECK(s.dimension() == 2);  // first row of the M2 block
    CHECK(right_action_residual(s) < 1e-12);
    const Submodule c = orthogonal_complement(s);
    CHECK(c.dimension() == 3);
    CHECK(same_submodule(sum(s, c), full_submodule(m)));
    CHECK(intersect(s, c).dimension() == 0);
    CHECK(is_orthogonally_closed(s));
    CHECK_FALSE(is_essential(s));
    CHECK(is_essential(full_submodule(m)));
  }

  TEST_CASE("property: F-perp equals F-perp-perp-perp") {
    Rng rng(23);
    for (int k = 0; k < 40; ++k) {
      const int n = rng.integer(2, 4);
      const ModuleSpec m{AlgebraDescriptor::matrix_blocks({n}), 2};
      std::vector<Mat> gens;
      const int ng = rng.integer(1, 2);
      for (int j = 0; j < ng; ++j) {
        Mat g = from_coords(m, rng.gaussian(m.dim(), 1));
        // make the generator rank one so the span is proper
        g = g.col(0) * rng.gaussian(1, n);
        gens.push_back(g);
      }
      const Submodule f = generate(m, gens);
      const Submodule p = orthogonal_complement(f);
      CHECK(f.dimension() + p.dimension() == m.dim());
      CHECK(same_submodule(p, orthogonal_complement(orthogonal_complement(p))));
      CHECK(right_action_residual(f) < 1e-10);
    }
  }

  TEST_CASE("property: for bounded T the adjoint graph is the conjugate transpose") {
    Rng rng(29);
    for (int n = 1; n <= 4; ++n) {
      for (int k = 0; k < 10; ++k) {
        const Mat T = rng.gaussian(n, n);
        const GraphOperator t = graph_of(mn(n), mn(n), T);
        const GraphOperator ts = adjoint_graph(t, cfg);
        CHECK(domain_of(ts).dimension() == mn(n).dim());
        const Mat oracle = left_action_matrix(mn(n), mn(n), T.adjoint());
        CHECK((action_matrix(ts) - oracle).norm() < 1e-9);
        const GraphOperator tss = adjoint_graph(ts, cfg);
        CHECK(same_submodule(tss.graph(), t.graph(), 1e-9));
        CHECK(is_graph(t, cfg));
      }
    }
  }

  TEST_CASE("property: Null(t*) is Range(t)-perp") {
    Rng rng(31);
    for (int n = 2; n <= 4; ++n) {
      for (int k = 0; k < 10; ++k) {
        const Mat T = rank_deficient(rng, n);
        const GraphOperator t = graph_of(mn(n), mn(n), T);
        const Submodule range = range_of(t);
        const Submodule null_adj = span_coords(mn(n), null_space(left_action_matrix(mn(n), mn(n), T.adjoint())));
        CHECK(null_adj.dimension() == n);
        CHECK(same_submodule(orthogonal_complement(range), null_adj, 1e-9));
      }
    }
  }

  TEST_CASE("property: projection onto the graph matches the (a b*; b 1-a*) formula") {
    Rng rng(37);
    for (int n = 1; n <= 3; ++n) {
      for (int k = 0; k < 10; ++k) {
        const Mat T = random_operator(rng, n);
        const GraphOperator t = graph_of(mn(n), mn(n), T);
        const Mat p_coords = projection_onto(t.graph());
        const Mat P = graph_projection(aab_forward(T), cfg);
        const ModuleSpec sum2 = direct_sum(mn(n), mn(n));
        CHECK((p_coords - left_action_matrix(sum2, sum2, P)).norm() < 1e-9);
        CHECK((p_coords * p_coords - p_coords).norm() < 1e-10);
      }
    }
  }

  TEST_CASE("quotient pair and composition") {
    Rng rng(41);
    const int n = 3;
    const Mat T = random_operator(rng, n);
    const AabTriple tr = aab_forward(T);
    const GraphOperator q = aab_inverse_graph(tr, mn(n), mn(n), cfg);
    const GraphOperator g = to_graph_subspace(q);
    CHECK(same_submodule(g.graph(), graph_of(mn(n), mn(n), T).graph(), 1e-9));
    const GraphOperator st = compose(graph_of(mn(n), mn(n), T), graph_of(mn(n), mn(n), T));
    CHECK((action_matrix(st) - left_action_matrix(mn(n), mn(n), T * T)).norm() < 1e-9);
  }

  TEST_CASE("regularity verdicts") {
    const RegularityVerdict id = is_graph_regular(graph_of(mn(3), mn(3), Mat::Identity(3, 3)), cfg);
    CHECK(id.essentially_defined);
    CHECK(id.graph_regular);
    CHECK(id.regular);

    const auto sym = [](const char* e, PointClass c) {
      const ModuleSpec m{AlgebraDescriptor::symbol_algebra(DomainSpec::real_line({0.0}), SymbolClass::C0), 1};
      return GraphOperator{m, m, SymbolOp{PiecewiseSymbol::uniform(DomainSpec::real_line({0.0}), Expr::parse(e),
                                                                    {{Location::at(0), c, {}}})}};
    };
    const RegularityVerdict e = is_graph_regular(sym("exp(i/x)", PointClass::SingSupp), cfg);
    CHECK(e.essentially_defined);
    CHECK_FALSE(e.graph_regular);
    const RegularityVerdict p = is_graph_regular(sym("1/x", PointClass::RegInf), cfg);
    CHECK(p.graph_regular);
    CHECK_FALSE(p.regular);
  }

  TEST_CASE("non-orthogonally-closed input is rejected by projection_onto") {
    // a submodule stored with a basis that is not closed under the right action
    const ModuleSpec m = mn(2);
    Submodule s{m, Mat::Zero(m.dim(), 1)};
    s.basis(0, 0) = 1;
    CHECK(right_action_residual(s) > 0.5);
  }

  TEST_CASE("grid model: Def(t*) is A0 for the nilpotent symbol") {
    const GridModel gm = grid_model();
    CHECK(gm.A.dim() == 9);
    CHECK(gm.A0.dimension() == 8);
    Eigen::Matrix2cd t;
    t << 0, 0, 1, 0;
    const Mat T = grid_operator(t, t, t);
    const GraphOperator tr = grid_restricted(gm, T);
    CHECK(domain_of(tr).dimension() == gm.A.dim());
    const GraphOperator ts = grid_adjoint(gm, T, cfg);
    CHECK(same_submodule(domain_of(ts), gm.A0));
    CHECK(fibre_in_pattern(T, gm.mask_M) == false);
    CHECK(fibre_in_pattern(T, gm.mask_LM));
  }
}
