#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qgt/relations.hpp"

using namespace qgt;

TEST_CASE("orthonormalize extracts a basis of the column space") {
  Eigen::MatrixXcd m(3, 3);
  m.col(0) << cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0);
  m.col(1) << cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0);  // dependent
  m.col(2) << cplx(0.0, 0.0), cplx(0.0, 1.0), cplx(0.0, 0.0);
  const Eigen::MatrixXcd q = lin::orthonormalize(m);
  CHECK(q.cols() == 2);
  CHECK((q.adjoint() * q - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);
  // Same span as the first and third input columns.
  Eigen::MatrixXcd expected(3, 2);
  expected.col(0) << cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0);
  expected.col(1) << cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0);
  CHECK(lin::subspace_distance(q, expected) < 1e-12);

  CHECK(lin::orthonormalize(Eigen::MatrixXcd::Zero(3, 2)).cols() == 0);
  CHECK(lin::orthonormalize(Eigen::MatrixXcd(3, 0)).cols() == 0);
}

TEST_CASE("null_space solves m x = 0") {
  Eigen::MatrixXcd m(1, 2);
  m << cplx(1.0, 0.0), cplx(1.0, 0.0);
  const Eigen::MatrixXcd n = lin::null_space(m);
  REQUIRE(n.cols() == 1);
  CHECK((m * n).cwiseAbs().maxCoeff() < 1e-14);

  // Full-rank square matrix: trivial null space.
  Eigen::MatrixXcd inv(2, 2);
  inv << cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  CHECK(lin::null_space(inv).cols() == 0);

  // Zero-row matrix annihilates nothing: the whole space.
  CHECK(lin::null_space(Eigen::MatrixXcd(0, 3)).cols() == 3);
}

TEST_CASE("subspace distance measures principal angles") {
  Eigen::MatrixXcd e1(2, 1), e2(2, 1), rot(2, 1);
  e1 << cplx(1.0, 0.0), cplx(0.0, 0.0);
  e2 << cplx(0.0, 0.0), cplx(1.0, 0.0);
  rot << cplx(0.0, 1.0), cplx(0.0, 0.0);  // same line as e1, rotated phase
  CHECK(lin::subspace_distance(e1, rot) < 1e-14);
  CHECK(lin::subspace_distance(e1, e2) == Catch::Approx(1.0));
  CHECK_THROWS_AS(lin::subspace_distance(e1, Eigen::MatrixXcd(3, 1)),
                  IndexSetMismatch);
}

TEST_CASE("require_invertible flags singular and rectangular inputs") {
  CHECK_THROWS_AS(lin::require_invertible(Eigen::MatrixXcd::Zero(2, 2), "t"),
                  NotInvertible);
  CHECK_THROWS_AS(lin::require_invertible(Eigen::MatrixXcd::Identity(2, 3), "t"),
                  NotInvertible);
  CHECK_NOTHROW(lin::require_invertible(Eigen::MatrixXcd::Identity(3, 3), "t"));
}

TEST_CASE("dual pairings: canonical, induced, and flipped") {
  const DualPairing can = DualPairing::canonical(2);
  Eigen::VectorXcd x(2), y(2);
  x << cplx(1.0, 1.0), cplx(0.0, 2.0);
  y << cplx(2.0, 0.0), cplx(1.0, -1.0);
  // Canonical pairing is the standard inner product, linear in y.
  CHECK(std::abs(can.pairing(y, x) -
                 (y(0) * std::conj(x(0)) + y(1) * std::conj(x(1)))) < 1e-15);
  CHECK(std::abs(can.flipped().pairing(x, y) - std::conj(can.pairing(y, x))) <
        1e-15);

  Eigen::MatrixXcd psi(2, 2);
  psi << cplx(2.0, 0.0), cplx(1.0, 0.5), cplx(0.0, 0.0), cplx(0.5, 0.0);
  const DualPairing ind = DualPairing::induced_by(psi);
  // Induced pairing re-coordinatizes the functional side through psi.
  const Eigen::VectorXcd pre = psi.partialPivLu().solve(y);
  CHECK(std::abs(ind.pairing(y, x) - can.pairing(pre, x)) < 1e-13);

  CHECK_THROWS_AS(DualPairing::induced_by(Eigen::MatrixXcd::Zero(2, 2)),
                  NotInvertible);
  CHECK_THROWS_AS(DualPairing::from_matrix(Eigen::MatrixXcd::Zero(2, 2)),
                  NotInvertible);
  CHECK_THROWS_AS(can.pairing(Eigen::VectorXcd::Zero(3), x), IndexSetMismatch);
}

TEST_CASE("annihilators complement the paired subspace") {
  const DualPairing can = DualPairing::canonical(2);
  Eigen::MatrixXcd span_e1(2, 1);
  span_e1 << cplx(1.0, 0.0), cplx(0.0, 0.0);
  const Eigen::MatrixXcd ann = can.annihilator(span_e1);
  REQUIRE(ann.cols() == 1);
  CHECK(std::abs(can.pairing(ann.col(0), span_e1.col(0))) < 1e-14);
  CHECK(std::abs(ann(1, 0)) == Catch::Approx(1.0));

  CHECK_THROWS_AS(can.annihilator(Eigen::MatrixXcd(3, 1)), IndexSetMismatch);
}

TEST_CASE("linear relations: graphs, membership, operator recovery") {
  Eigen::MatrixXcd a(2, 3);
  a << cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 1.0),
       cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(3.0, 0.0);
  const LinearRelation r = LinearRelation::graph(a);
  CHECK(r.n1 == 3);
  CHECK(r.n2 == 2);
  CHECK(r.dim() == 3);

  Eigen::VectorXcd x(3);
  x << cplx(1.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, 2.0);
  CHECK(r.contains(x, a * x));
  Eigen::VectorXcd off = a * x;
  off(0) += cplx(0.01, 0.0);
  CHECK_FALSE(r.contains(x, off));

  Eigen::MatrixXcd sq(2, 2);
  sq << cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  const LinearRelation rs = LinearRelation::graph(sq);
  CHECK((rs.operator_matrix() - sq).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(
      LinearRelation::from_columns(2, 2, Eigen::MatrixXcd::Identity(3, 1)),
      IndexSetMismatch);

  // A multivalued relation has no operator matrix.
  Eigen::MatrixXcd col(2, 1);
  col << cplx(0.0, 0.0), cplx(1.0, 0.0);
  const LinearRelation mv = LinearRelation::from_columns(1, 1, col);
  CHECK_THROWS_AS(mv.operator_matrix(), NotInvertible);
}

TEST_CASE("relation parts: the purely multivalued relation {0} x C") {
  Eigen::MatrixXcd col(2, 1);
  col << cplx(0.0, 0.0), cplx(1.0, 0.0);
  const LinearRelation r = LinearRelation::from_columns(1, 1, col);
  const RelationParts p = relation_parts(r);
  CHECK(p.dom.cols() == 0);
  CHECK(p.ker.cols() == 0);
  CHECK(p.ran.cols() == 1);
  CHECK(p.mul.cols() == 1);
}

TEST_CASE("relation parts of a graph recover kernel and range") {
  Eigen::MatrixXcd a(2, 3);
  a << cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0),
       cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0);
  const RelationParts p = relation_parts(LinearRelation::graph(a));
  CHECK(p.dom.cols() == 3);  // everywhere defined
  CHECK(p.mul.cols() == 0);  // single-valued
  CHECK(p.ran.cols() == 2);
  REQUIRE(p.ker.cols() == 1);
  CHECK((a * p.ker).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("adjoint relation with canonical pairings is the conjugate transpose") {
  Eigen::MatrixXcd a(2, 2);
  a << cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  const LinearRelation adj =
      adjoint_relation(LinearRelation::graph(a), DualPairing::canonical(2),
                       DualPairing::canonical(2));
  CHECK(adj.n1 == 2);
  CHECK(adj.n2 == 2);
  CHECK(lin::subspace_distance(adj.basis,
                               LinearRelation::graph(a.adjoint()).basis) <
        1e-13);
  CHECK((adj.operator_matrix() - a.adjoint()).cwiseAbs().maxCoeff() < 1e-13);

  // Double adjoint with canonical pairings is the identity on relations.
  const LinearRelation adj2 = adjoint_relation(adj, DualPairing::canonical(2),
                                               DualPairing::canonical(2));
  CHECK(lin::subspace_distance(adj2.basis, LinearRelation::graph(a).basis) <
        1e-13);

  CHECK_THROWS_AS(adjoint_relation(LinearRelation::graph(a),
                                   DualPairing::canonical(3),
                                   DualPairing::canonical(2)),
                  IndexSetMismatch);
}

TEST_CASE("adjoint defining identity holds pairwise") {
  Rng rng(41);
  const Eigen::MatrixXcd a = lin::random_matrix(rng, 3, 4);
  const DualPairing p1 = DualPairing::induced_by(lin::random_matrix(rng, 4, 4));
  const DualPairing p2 = DualPairing::induced_by(lin::random_matrix(rng, 3, 3));
  const LinearRelation r = LinearRelation::graph(a);
  const LinearRelation adj = adjoint_relation(r, p1, p2);

  // pair2(u, y) = pair1(v, x) for every (x,y) in r and (u,v) in adj.
  for (Eigen::Index i = 0; i < r.dim(); ++i) {
    const Eigen::VectorXcd x = r.first_block().col(i);
    const Eigen::VectorXcd y = r.second_block().col(i);
    for (Eigen::Index j = 0; j < adj.dim(); ++j) {
      const Eigen::VectorXcd u = adj.first_block().col(j);
      const Eigen::VectorXcd v = adj.second_block().col(j);
      CHECK(std::abs(p2.pairing(u, y) - p1.pairing(v, x)) < 1e-12);
    }
  }
}

TEST_CASE("change of pairing: diagonal example with known closed form") {
  Eigen::MatrixXcd a(2, 2);
  a << cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  Eigen::MatrixXcd psi1(2, 2);
  psi1 << cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.5, 0.0);
  const ChangeOfPairingReport rep =
      change_of_pairing_check(a, psi1, Eigen::MatrixXcd::Identity(2, 2));
  CHECK(rep.pass);
  CHECK(rep.residual <= rep.tolerance_used);
  CHECK(rep.tolerance_used == Catch::Approx(1e-12 * 4.0));  // kappa(psi1) = 4

  Eigen::MatrixXcd expected(2, 2);
  expected << cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.5, 0.0);
  CHECK((rep.adjoint_by_formula - expected).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((rep.adjoint_by_definition - expected).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("change of pairing rejects singular and mismatched isomorphisms") {
  Eigen::MatrixXcd a(2, 2);
  a << cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
  CHECK_THROWS_AS(change_of_pairing_check(a, Eigen::MatrixXcd::Zero(2, 2),
                                          Eigen::MatrixXcd::Identity(2, 2)),
                  NotInvertible);
  CHECK_THROWS_AS(change_of_pairing_check(a, Eigen::MatrixXcd::Identity(3, 3),
                                          Eigen::MatrixXcd::Identity(2, 2)),
                  IndexSetMismatch);
}

TEST_CASE("change of pairing holds on random inputs") {
  Rng rng(43);
  for (int k = 0; k < 25; ++k) {
    const Eigen::Index n1 = 2 + (k % 3);
    const Eigen::Index n2 = 2 + ((k + 1) % 3);
    const ChangeOfPairingReport rep = change_of_pairing_check(
        lin::random_matrix(rng, n2, n1), lin::random_matrix(rng, n1, n1),
        lin::random_matrix(rng, n2, n2));
    CHECK(rep.pass);
  }
}

TEST_CASE("I + T*T is positive and solvable for random T") {
  Rng rng(47);
  for (int k = 0; k < 25; ++k) {
    const VonNeumannReport rep =
        von_neumann_check(lin::random_matrix(rng, 3 + (k % 3), 2 + (k % 4)),
                          TolerancePolicy{}, rng.next_u64());
    CHECK(rep.pass);
    CHECK(rep.min_eig_left >= 1.0 - 1e-12);
    CHECK(rep.min_eig_right >= 1.0 - 1e-12);
    CHECK(rep.hermitian_residual <= 1e-12);
    CHECK_FALSE(rep.note.empty());
  }
}

TEST_CASE("cesaro selection on orthonormal sequences") {
  const IndexSet set = IndexSet::finite(100);
  std::vector<CoeffVector> vecs;
  for (std::int64_t i = 1; i <= 100; ++i)
    vecs.push_back(CoeffVector::basis(set, i));

  const CesaroResult r = cesaro_select(vecs, 100);
  REQUIRE(r.indices.size() == 100);
  CHECK(r.indices.front() == 0);  // zero-based positions
  CHECK(r.indices.back() == 99);
  CHECK(r.cesaro_norm == Catch::Approx(0.1));
  CHECK(r.max_norm == Catch::Approx(1.0));
  CHECK(r.cesaro_norm <= r.bound);
  CHECK(r.bound == Catch::Approx(std::sqrt(0.01 + std::log(100.0) / 100.0)));
}

TEST_CASE("cesaro selection on sixteen orthonormal vectors") {
  const IndexSet set = IndexSet::finite(16);
  std::vector<CoeffVector> vecs;
  for (std::int64_t i = 1; i <= 16; ++i)
    vecs.push_back(CoeffVector::basis(set, i));
  const CesaroResult r = cesaro_select(vecs, 16);
  CHECK(r.cesaro_norm == Catch::Approx(0.25));
  CHECK(r.cesaro_norm <= std::sqrt(1.0 / 16.0 + std::log(16.0) / 16.0));
}

TEST_CASE("cesaro selection exhausts on constant sequences") {
  const IndexSet set = IndexSet::finite(2);
  const std::vector<CoeffVector> vecs(4, CoeffVector::basis(set, 1));
  try {
    cesaro_select(vecs, 2);
    FAIL("expected SelectionExhausted");
  } catch (const SelectionExhausted& e) {
    REQUIRE(e.partial_indices.size() == 1);
    CHECK(e.partial_indices[0] == 0);
  }

  CHECK_THROWS_AS(cesaro_select(vecs, 0), std::invalid_argument);

  std::vector<CoeffVector> mixed{CoeffVector::basis(set, 1),
                                 CoeffVector::basis(IndexSet::finite(3), 1)};
  CHECK_THROWS_AS(cesaro_select(mixed, 1), IndexSetMismatch);
}

TEST_CASE("cesaro selection skips strongly correlated candidates") {
  const IndexSet set = IndexSet::finite(4);
  // e1, e1 again (inadmissible at k=2), then e2: selection must skip index 1.
  std::vector<CoeffVector> vecs{CoeffVector::basis(set, 1),
                                CoeffVector::basis(set, 1),
                                CoeffVector::basis(set, 2)};
  const CesaroResult r = cesaro_select(vecs, 2);
  REQUIRE(r.indices.size() == 2);
  CHECK(r.indices[0] == 0);
  CHECK(r.indices[1] == 2);
}
