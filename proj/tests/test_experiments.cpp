#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "grreg/error.hpp"
#include "grreg/experiments.hpp"
#include "grreg/matrix_symbol.hpp"
#include "grreg/transforms.hpp"

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

// Dense least squares over the pattern (K K; K B), written out from the definitions.
double dense_defect(const TruncatedOperatorPair& p, bool star) {
  const int K = p.K, h = K * K, core = p.core;
  const RMat X0 = RMat(p.x);
  const RMat X = star ? RMat(X0.transpose()) : X0;
  auto core_index = [&](int j) { return (j % K) < core && (j / K) < core; };
  double total = 0;
  for (int l = 0; l < K; ++l) {
    const int c = h + l * K;  // index (0, l) of the second copy
    std::vector<int> rows;
    for (int r = 0; r < 2 * h; ++r)
      if (r >= h || (core_index(r) && core_index(c - h))) rows.push_back(r);
    RMat A(2 * h, rows.size());
    for (std::size_t u = 0; u < rows.size(); ++u) A.col(u) = X.col(rows[u]);
    RVec e = RVec::Zero(2 * h);
    e(c) = 1;
    const RVec y = A.completeOrthogonalDecomposition().solve(e);
    total += (A * y - e).squaredNorm();
  }
  return std::sqrt(total / K);
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("resolvent on the grid model leaves the pattern") {
    const GridModel gm = grid_model();
    Eigen::Matrix2cd n;
    n << 0, 0, 1, 0;
    const Mat T = grid_operator(n, n, n);
    const ResolventVerdict v = resolvent_affiliation_check(gm.A.algebra, T, cd(0, 1), cfg);
    CHECK_FALSE(v.affiliated);
    CHECK_FALSE(v.multiplier);
    // nilpotent t: (t - i)^-1 = i + t
    CHECK((v.resolvent - (cd(0, 1) * Mat::Identity(T.rows(), T.cols()) + T)).norm() < 1e-13);
    REQUIRE_FALSE(v.failures.empty());
    CHECK(v.failures.front().find("(6,5)") != std::string::npos);
    CHECK_FALSE(fibre_in_pattern(v.resolvent, gm.mask_A));
  }

  TEST_CASE("property: resolvents in full matrix algebras are affiliated") {
    Rng rng(301);
    for (int k = 0; k < 40; ++k) {
      const int n = rng.integer(2, 6);
      const Mat t = random_operator(rng, n);
      const cd lambda = 3.0 * rng.cnormal();
      const ResolventVerdict v = resolvent_affiliation_check(AlgebraDescriptor::matrix_blocks({n}), t, lambda, cfg);
      CHECK(v.affiliated);
      CHECK((v.resolvent * (t - lambda * Mat::Identity(n, n)) - Mat::Identity(n, n)).norm() < 1e-10);
      CHECK(std::abs(v.min_sv - min_singular_value(t - lambda * Mat::Identity(n, n))) < 1e-12);
    }
    // block diagonal t in M2 (+) M1
    Mat t = Mat::Zero(3, 3);
    t.topLeftCorner(2, 2) = rng.gaussian(2, 2);
    t(2, 2) = 0.5;
    CHECK(resolvent_affiliation_check(AlgebraDescriptor::matrix_blocks({2, 1}), t, cd(0, 2), cfg).affiliated);
    CHECK(code_of([] { resolvent_affiliation_check(AlgebraDescriptor::matrix_blocks({2}), Mat::Identity(2, 2), 1.0, cfg); }) ==
          Errc::LambdaInSpectrum);
    CHECK(code_of([] { resolvent_affiliation_check(AlgebraDescriptor::matrix_blocks({3}), Mat::Identity(2, 2), 0.5, cfg); }) ==
          Errc::DescriptorMismatch);
  }

  TEST_CASE("property: algebraic relations between the triples of t and t*") {
    Rng rng(307);
    for (int k = 0; k < 60; ++k) {
      const Mat t = random_operator(rng, rng.integer(2, 6));
      const RelationResiduals r = algebraic_relations(t);
      CHECK(r.quadratic < 1e-10);
      CHECK(r.intertwining < 1e-10);
    }
    for (int k = 0; k < 20; ++k) CHECK(q_relation_residual(gen::normal(rng, rng.integer(2, 5)), 1.0) < 1e-10);
    Mat nn = Mat::Zero(2, 2);
    nn(0, 1) = 1;
    CHECK(q_relation_residual(nn, 1.0) > 0.1);
  }

  TEST_CASE("counterdensity defect matches dense least squares") {
    for (bool control : {false, true}) {
      const TruncatedOperatorPair p = counterdensity_pair(8, cfg, control);
      CHECK(p.core == 4);
      CHECK(std::abs(density_defect(p, DensitySide::Left) - dense_defect(p, false)) < 1e-10);
      CHECK(std::abs(density_defect(p, DensitySide::Star) - dense_defect(p, true)) < 1e-10);
    }
    const TruncatedOperatorPair c = counterdensity_pair(8, cfg, true);
    CHECK(std::abs(density_defect(c, DensitySide::Left) - 0.5) < 1e-12);
    for (int K : {8, 12, 16}) {
      const TruncatedOperatorPair p = counterdensity_pair(K, cfg);
      CHECK(std::abs(density_defect(p, DensitySide::Star) - std::sqrt(1.0 - double(p.core) / K)) < 1e-12);
    }
    CHECK(code_of([] { counterdensity_pair(4, cfg); }) == Errc::BadParameters);
    CHECK(code_of([] { counterdensity_pair(65, cfg); }) == Errc::BadParameters);
  }

  TEST_CASE("counterdensity sweep table") {
    const std::vector<DensityRow> rows = density_sweep({8, 16}, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].left < rows[0].left);
    const nlohmann::json j = density_table_json(rows, cfg, false);
    CHECK(j["left_strictly_decreasing"] == true);
    CHECK(j["star_above_floor"] == true);
    CHECK(j["left"][1]["param"] == 16);
  }

  TEST_CASE("Weyl grid construction and recurrences") {
    CHECK(code_of([] { weyl_build(0.0, -1.0, 256, 20); }) == Errc::BadParameters);
    CHECK(code_of([] { weyl_build(1.0, 0.0, 256, 20); }) == Errc::BadParameters);
    CHECK(code_of([] { weyl_build(1.0, -1.0, 128, 20); }) == Errc::BadParameters);
    CHECK(code_of([] { weyl_build(1.0, -1.0, 256, 0.0); }) == Errc::BadParameters);
    CHECK(code_of([] { weyl_relations(weyl_build(1.0, -1.0, 256, 20, false)); }) == Errc::BadParameters);

    const WeylGrid w = weyl_build(1.0, -1.0, 256, 20);
    CHECK(std::abs(w.delta - 40.0 / 256) < 1e-15);
    CHECK(std::abs(w.t(0) + 20 - w.delta / 2) < 1e-12);
    CHECK(std::abs(w.xdiag(10) - 1.0 / (w.t(10) - cd(0, 1))) < 1e-15);
    CHECK(std::abs(w.y(3, 3) - cd(0, -w.delta)) < 1e-15);
    CHECK(std::abs(w.y(3, 2)) == 0.0);
    CHECK(std::abs(w.y(2, 5) - cd(0, -1) * std::exp(-(w.t(5) - w.t(2))) * w.delta) < 1e-15);

    Rng rng(311);
    for (int k = 0; k < 5; ++k) {
      const Vec v = rng.gaussian(w.M, 1);
      CHECK((weyl_apply_y(w, v) - w.y * v).norm() < 1e-12 * v.norm());
      CHECK((weyl_apply_y_adjoint(w, v) - w.y.adjoint() * v).norm() < 1e-12 * v.norm());
    }
  }

  TEST_CASE("Weyl relations against independent norms") {
    const WeylGrid w = weyl_build(1.0, -1.0, 256, 20);
    const WeylRelations r = weyl_relations(w);
    Eigen::JacobiSVD<Mat> svd(w.y);
    CHECK(std::abs(r.norm_y - svd.singularValues()(0)) < 1e-10);
    // the kernel discretises a Volterra operator of norm 1/|beta|
    CHECK(std::abs(r.norm_y - 1.0) < w.delta);
    // the closest grid point to 0 is delta/2
    CHECK(std::abs(r.norm_x - 1.0 / std::sqrt(1.0 + w.delta * w.delta / 4)) < 1e-12);
    CHECK(r.xyrel1 < 1e-12);
    const Mat yx = w.y * w.xdiag.asDiagonal();
    const Eigen::JacobiSVD<Mat> s2(yx);
    CHECK((r.sv_yx - s2.singularValues()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(r.sv_quarter - r.sv_yx(w.M / 4)) == 0.0);
    CHECK(r.xyrel2_plus < r.xyrel2_minus);
  }

  TEST_CASE("Weyl limits on a fine grid") {
    const WeylGrid w = weyl_build(1.0, -1.0, 8192, 20, false);
    const std::vector<double> eps = weyl_default_eps(w, cfg);
    REQUIRE(eps.size() == 6);
    CHECK(std::abs(eps.back() - 8 * w.delta) < 1e-12);
    CHECK(std::abs(eps.front() - 32 * eps.back()) < 1e-12);
    const WeylLimits lim = weyl_limits(w, 0.0, eps, cfg);
    CHECK(std::abs(lim.target - 1.0 / cd(0, -1)) < 1e-15);
    for (const WeylLimitRow& row : lim.rows) CHECK(std::abs(row.norm - 1.0) < 1e-12);
    CHECK(lim.rows.back().x_error < 0.05);
    CHECK(lim.x_monotone);
    CHECK(lim.y_monotone);
    CHECK(code_of([&] { weyl_limits(w, 0.0, {4 * w.delta}, cfg); }) == Errc::EpsilonBelowGrid);
    CHECK(code_of([&] { weyl_limits(w, 19.9, {1.0}, cfg); }) == Errc::BadParameters);
    CHECK(code_of([&] { weyl_limits(w, 0.0, {0.5, 1.0}, cfg); }) == Errc::BadParameters);
  }
}
