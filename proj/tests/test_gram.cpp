#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qgt/gram.hpp"
#include "qgt/rng.hpp"

using namespace qgt;

namespace {

// Small Hermitian positive-definite matrix with a known off-diagonal part.
Eigen::MatrixXcd sample_spd() {
  Eigen::MatrixXcd m(3, 3);
  m << cplx(4.0, 0.0), cplx(1.0, 1.0), cplx(0.0, 0.0),
       cplx(1.0, -1.0), cplx(3.0, 0.0), cplx(0.5, 0.0),
       cplx(0.0, 0.0), cplx(0.5, 0.0), cplx(2.0, 0.0);
  return m;
}

}  // namespace

TEST_CASE("gram operator constructors and accessors") {
  const GramOperator id = GramOperator::identity(4);
  CHECK(id.kind() == GramOperator::Kind::finite_diagonal);
  CHECK(id.dim() == 4);
  CHECK(id.index_set() == IndexSet::finite(4));
  CHECK(id.weight_at(3) == 1.0);
  CHECK(id.condition_number() == 1.0);

  const GramOperator diag = GramOperator::finite_diagonal({4.0, 1.0, 0.25});
  CHECK(diag.min_weight() == 0.25);
  CHECK(diag.max_weight() == 4.0);
  CHECK(diag.condition_number() == Catch::Approx(16.0));
  CHECK(diag.sqrt_weight_at(1) == 2.0);
  CHECK(diag.sqrt_weight_at(3) == 0.5);
  CHECK_THROWS_AS(diag.weight_at(0), IndexSetMismatch);
  CHECK_THROWS_AS(diag.weight_at(4), IndexSetMismatch);
  CHECK_THROWS_AS(diag.matrix(), Error);  // not dense
  CHECK_THROWS_AS(GramOperator::finite_diagonal({}), Error);

  const GramOperator ana = GramOperator::analytic(WeightSpec::paper_ell2());
  CHECK(ana.index_set() == IndexSet::symmetric());
  CHECK(ana.weight_at(-2) == Catch::Approx(0.25));
  CHECK(ana.min_weight() == 0.0);
  CHECK(ana.max_weight() == kInf);
  CHECK_THROWS_AS(ana.dim(), Error);
  CHECK_THROWS_AS(ana.lambdas(), Error);
}

TEST_CASE("dense gram operators reject asymmetry and cache eigen data") {
  Eigen::MatrixXcd bad(2, 2);
  bad << cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  CHECK_THROWS_AS(GramOperator::dense(bad), NotSelfAdjoint);

  const GramOperator g = GramOperator::dense(sample_spd());
  CHECK(g.kind() == GramOperator::Kind::dense_spd);
  CHECK(g.dim() == 3);
  CHECK((g.matrix() - g.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.min_weight() > 0.0);
  CHECK(g.eigen().eigenvalues(0) <= g.eigen().eigenvalues(2));

  // Eigenvectors reconstruct the matrix.
  const auto& e = g.eigen();
  const Eigen::MatrixXcd rebuilt = e.eigenvectors *
                                   e.eigenvalues.asDiagonal().toDenseMatrix() *
                                   e.eigenvectors.adjoint();
  CHECK((rebuilt - g.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(GramOperator::dense(Eigen::MatrixXcd(0, 0)), Error);
  CHECK_THROWS_AS(GramOperator::dense(Eigen::MatrixXcd::Zero(2, 3)), Error);
}

TEST_CASE("condition_for restricts to the touched weights on diagonal kinds") {
  const GramOperator diag = GramOperator::finite_diagonal({4.0, 1.0, 0.25});
  const IndexSet set = diag.index_set();
  const CoeffVector mid = CoeffVector::basis(set, 2);
  CHECK(diag.condition_for({&mid}) == 1.0);
  const CoeffVector wide(set, {{1, cplx(1.0, 0.0)}, {3, cplx(1.0, 0.0)}});
  CHECK(diag.condition_for({&wide}) == Catch::Approx(16.0));
  CHECK(diag.condition_for({&mid, &wide}) == Catch::Approx(16.0));
  const CoeffVector empty(set);
  CHECK(diag.condition_for({&empty}) == 1.0);

  const GramOperator dense = GramOperator::dense(sample_spd());
  const CoeffVector e1 = CoeffVector::basis(dense.index_set(), 1);
  CHECK(dense.condition_for({&e1}) == Catch::Approx(dense.condition_number()));
}

TEST_CASE("functional calculus powers compose and invert") {
  const GramOperator diag = GramOperator::finite_diagonal({4.0, 1.0, 0.25});
  const IndexSet set = diag.index_set();
  const CoeffVector f(set, {{1, cplx(1.0, 2.0)}, {3, cplx(-1.0, 0.0)}});

  const CoeffVector gf = gram_apply(diag, f, 1.0);
  CHECK(gf.at(1) == cplx(4.0, 8.0));
  CHECK(gf.at(3) == cplx(-0.25, 0.0));

  const CoeffVector half_twice = gram_apply(diag, gram_apply(diag, f, 0.5), 0.5);
  for (const auto& [i, c] : gf.entries())
    CHECK(std::abs(half_twice.at(i) - c) < 1e-14);

  const CoeffVector round = gram_apply(diag, gf, -1.0);
  for (const auto& [i, c] : f.entries())
    CHECK(std::abs(round.at(i) - c) < 1e-14);

  CHECK_THROWS_AS(gram_apply(diag, f, 0.25), std::invalid_argument);

  const GramOperator touching = GramOperator::finite_diagonal({0.0, 1.0});
  const CoeffVector e1 = CoeffVector::basis(touching.index_set(), 1);
  CHECK_THROWS_AS(gram_apply(touching, e1, -1.0), NotInjective);
  CHECK_THROWS_AS(gram_apply(touching, e1, -0.5), NotInjective);
}

TEST_CASE("dense calculus agrees with the eigendecomposition route") {
  const GramOperator g = GramOperator::dense(sample_spd());
  const IndexSet set = g.index_set();
  const CoeffVector f(set, {{1, cplx(1.0, 0.5)}, {2, cplx(-2.0, 1.0)}});

  const CoeffVector gf = gram_apply(g, f, 1.0);
  const Eigen::VectorXcd direct = g.matrix() * to_eigen(f, 3);
  for (std::int64_t i = 1; i <= 3; ++i)
    CHECK(std::abs(gf.at(i) - direct(i - 1)) < 1e-13);

  // G^{-1/2} G^{1/2} = identity within rounding scaled by the spectrum.
  const CoeffVector round = gram_apply(g, gram_apply(g, f, 0.5), -0.5);
  for (std::int64_t i = 1; i <= 3; ++i)
    CHECK(std::abs(round.at(i) - f.at(i)) < 1e-12);

  // apply_calculus with a constant function is a plain scaling.
  const CoeffVector twice = g.apply_calculus(f, [](double) { return 2.0; });
  for (std::int64_t i = 1; i <= 3; ++i)
    CHECK(std::abs(twice.at(i) - 2.0 * f.at(i)) < 1e-13);
}

TEST_CASE("spectral projections mask diagonal coordinates by sqrt-weight") {
  const GramOperator diag = GramOperator::finite_diagonal({4.0, 1.0, 0.25});
  const IndexSet set = diag.index_set();
  // sqrt-weights: 2, 1, 0.5 — the unit cut keeps indices 2 and 3.
  const SpectralProjector inside = spectral_projection(diag, IntervalSet::unit());
  CHECK_FALSE(inside.is_dense());
  CHECK_FALSE(inside.keeps_index(1));
  CHECK(inside.keeps_index(2));  // boundary lands inside (0,1]
  CHECK(inside.keeps_index(3));

  const CoeffVector x(set, {{1, cplx(1.0, 0.0)}, {2, cplx(2.0, 0.0)}, {3, cplx(3.0, 0.0)}});
  const CoeffVector in = inside.apply(x);
  CHECK(in.at(1) == cplx(0.0, 0.0));
  CHECK(in.at(2) == cplx(2.0, 0.0));
  CHECK(in.at(3) == cplx(3.0, 0.0));

  const SpectralProjector outside =
      spectral_projection(diag, IntervalSet::unit().complement());
  const CoeffVector out = outside.apply(x);
  CHECK(vec_axpy(cplx(1.0, 0.0), in, out) == x);

  CHECK_THROWS_AS(spectral_projection(diag, IntervalSet()), InvalidInterval);
}

TEST_CASE("spectral projections on analytic weights follow the formula") {
  const GramOperator ana = GramOperator::analytic(WeightSpec::paper_ell2());
  const SpectralProjector p = spectral_projection(ana, IntervalSet::unit());
  CHECK(p.keeps_index(1));    // sqrt-weight 1
  CHECK(p.keeps_index(-1));   // sqrt-weight 1
  CHECK(p.keeps_index(-5));   // sqrt-weight 1/5
  CHECK_FALSE(p.keeps_index(2));  // sqrt-weight 2
  CHECK_THROWS_AS(p.matrix(), Error);
}

TEST_CASE("dense spectral projections are Hermitian idempotents of the right rank") {
  const GramOperator g = GramOperator::dense(sample_spd());
  // Cut on the sqrt(lambda) scale splitting the three eigenvalues.
  const double split = std::sqrt(g.eigen().eigenvalues(1)) + 1e-9;
  const SpectralProjector low =
      spectral_projection(g, IntervalSet(Interval(0.0, split)));
  REQUIRE(low.is_dense());
  CHECK(low.rank() == 2);
  const Eigen::MatrixXcd pm = low.matrix();
  CHECK((pm * pm - pm).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((pm - pm.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(low.keeps_index(1), Error);

  // Projection commutes with the operator's calculus.
  const CoeffVector f(g.index_set(), {{1, cplx(1.0, 1.0)}, {3, cplx(2.0, 0.0)}});
  const CoeffVector a = low.apply(gram_apply(g, f, 1.0));
  const CoeffVector b = gram_apply(g, low.apply(f), 1.0);
  for (std::int64_t i = 1; i <= 3; ++i)
    CHECK(std::abs(a.at(i) - b.at(i)) < 1e-12);
}

TEST_CASE("gram validation gates injectivity") {
  CHECK_THROWS_AS(validate_gram(GramOperator::finite_diagonal({1.0, 0.0})),
                  NotInjective);
  CHECK_THROWS_AS(validate_gram(GramOperator::finite_diagonal({1.0, -2.0})),
                  NotInjective);
  CHECK_THROWS_AS(validate_gram(GramOperator::finite_diagonal({1.0, 1e-20})),
                  NotInjective);

  const GramValidation ok = validate_gram(GramOperator::finite_diagonal({4.0, 0.25}));
  CHECK(ok.pass);
  CHECK(ok.condition == Catch::Approx(16.0));

  const GramValidation ana =
      validate_gram(GramOperator::analytic(WeightSpec::paper_ell2()));
  CHECK(ana.pass);
  CHECK(ana.condition == kInf);
  CHECK_FALSE(ana.note.empty());
}

TEST_CASE("eigen conversion round trip preserves canonical pruning") {
  const IndexSet set = IndexSet::finite(4);
  const CoeffVector f(set, {{2, cplx(1.0, -1.0)}});
  const Eigen::VectorXcd v = to_eigen(f, 4);
  CHECK(v(0) == cplx(0.0, 0.0));
  CHECK(v(1) == cplx(1.0, -1.0));
  const CoeffVector back = from_eigen(set, v);
  CHECK(back == f);
  CHECK(back.support_size() == 1);  // zeros pruned on the way back
}
