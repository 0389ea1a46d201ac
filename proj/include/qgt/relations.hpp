#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/rng.hpp"

namespace qgt {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// ── small subspace toolbox ──────────────────────────────────────────────────

namespace lin {

inline double rank_cutoff(const Eigen::JacobiSVD<MatrixXcd>& svd) {
  const double smax =
      svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  const double dim = static_cast<double>(
      std::max(svd.rows(), svd.cols()));
  return smax * dim * std::numeric_limits<double>::epsilon();
}

// Orthonormal basis of the column space (thin U restricted to the numerical
// rank). Zero or empty input yields a rows x 0 matrix.
inline MatrixXcd orthonormalize(const MatrixXcd& m) {
  if (m.cols() == 0 || m.rows() == 0) return MatrixXcd(m.rows(), 0);
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU);
  const double cut = rank_cutoff(svd);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() &&
         svd.singularValues()(rank) > cut)
    ++rank;
  return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of the null space of m (acting on column vectors).
inline MatrixXcd null_space(const MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0)
    return MatrixXcd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullV);
  const double cut = rank_cutoff(svd);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() &&
         svd.singularValues()(rank) > cut)
    ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

// Largest principal-angle sine between two subspaces given by orthonormal
// bases: the spectral norm of the difference of the orthogonal projectors.
inline double subspace_distance(const MatrixXcd& a, const MatrixXcd& b) {
  if (a.rows() != b.rows())
    throw IndexSetMismatch("subspace_distance: ambient dimensions differ");
  const MatrixXcd diff = a * a.adjoint() - b * b.adjoint();
  if (diff.rows() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(diff);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

inline double condition_number(const MatrixXcd& m) {
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 0.0)
    return std::numeric_limits<double>::infinity();
  return s(0) / (s(s.size() - 1));
}

inline void require_invertible(const MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols())
    throw NotInvertible(std::string(what) + ": matrix is not square");
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const double cut = rank_cutoff(svd);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= cut)
    throw NotInvertible(std::string(what) + ": matrix is numerically singular");
}

inline MatrixXcd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.next_complex_gaussian();
  return m;
}

}  // namespace lin

// ── dual pairings ───────────────────────────────────────────────────────────

// A nondegenerate sesquilinear pairing between two n-dimensional coordinate
// spaces: pairing(y, x) = y^T conj(M x). It is linear in y, antilinear in x,
// and the canonical M = I reproduces the standard inner product. M must be
// invertible so that y -> pairing(y, .) hits every antilinear functional.
struct DualPairing {
  Eigen::Index dim = 0;
  MatrixXcd matrix;

  static DualPairing canonical(Eigen::Index n) {
    return DualPairing{n, MatrixXcd::Identity(n, n)};
  }

  // Pairing obtained by re-coordinatizing the functional side through the
  // invertible map psi: new(y, x) = old(psi^{-1} y, x). With the canonical
  // old pairing the stored matrix becomes psi^{-H}.
  static DualPairing induced_by(const MatrixXcd& psi) {
    lin::require_invertible(psi, "DualPairing::induced_by");
    return DualPairing{psi.rows(),
                       psi.adjoint().partialPivLu().solve(
                           MatrixXcd::Identity(psi.rows(), psi.rows()))};
  }

  static DualPairing from_matrix(MatrixXcd m) {
    lin::require_invertible(m, "DualPairing");
    Eigen::Index n = m.rows();
    return DualPairing{n, std::move(m)};
  }

  // Same pairing read from the other side: flip(x, y) = conj(pairing(y, x)),
  // whose matrix is the conjugate transpose.
  DualPairing flipped() const { return DualPairing{dim, matrix.adjoint()}; }

  cplx pairing(const VectorXcd& y, const VectorXcd& x) const {
    if (y.size() != dim || x.size() != dim)
      throw IndexSetMismatch("DualPairing: vector sizes do not match");
    return (y.transpose() * (matrix * x).conjugate()).value();
  }

  // Vectors y annihilating every column of basis under this pairing.
  MatrixXcd annihilator(const MatrixXcd& basis) const {
    if (basis.rows() != dim)
      throw IndexSetMismatch("DualPairing: ambient dimension mismatch");
    return lin::null_space((matrix * basis).adjoint());
  }
};

// ── linear relations ────────────────────────────────────────────────────────

// A linear subspace of C^{n1} x C^{n2} in stacked (x; y) coordinates. The
// basis is orthonormalized on construction, so membership is a projection
// residual and the column count is the dimension.
struct LinearRelation {
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;
  MatrixXcd basis;  // (n1+n2) x dim, orthonormal columns

  static LinearRelation from_columns(Eigen::Index n1, Eigen::Index n2,
                                     const MatrixXcd& columns) {
    if (columns.rows() != n1 + n2)
      throw IndexSetMismatch(
          "LinearRelation: columns must have n1+n2 rows");
    return LinearRelation{n1, n2, lin::orthonormalize(columns)};
  }

  // The graph {(x, Ax)} of a matrix acting C^{cols} -> C^{rows}.
  static LinearRelation graph(const MatrixXcd& a) {
    MatrixXcd cols(a.cols() + a.rows(), a.cols());
    cols.topRows(a.cols()) = MatrixXcd::Identity(a.cols(), a.cols());
    cols.bottomRows(a.rows()) = a;
    return LinearRelation{a.cols(), a.rows(), lin::orthonormalize(cols)};
  }

  Eigen::Index dim() const { return basis.cols(); }
  MatrixXcd first_block() const { return basis.topRows(n1); }
  MatrixXcd second_block() const { return basis.bottomRows(n2); }

  bool contains(const VectorXcd& x, const VectorXcd& y,
                double tol = 1e-12) const {
    if (x.size() != n1 || y.size() != n2)
      throw IndexSetMismatch("LinearRelation::contains: size mismatch");
    VectorXcd v(n1 + n2);
    v << x, y;
    const VectorXcd res = v - basis * (basis.adjoint() * v);
    return res.norm() <= tol * std::max(1.0, v.norm());
  }

  // Recovers the matrix of an everywhere-defined single-valued relation
  // (first block square and invertible on the basis coordinates).
  MatrixXcd operator_matrix() const {
    const MatrixXcd top = first_block();
    if (dim() != n1)
      throw NotInvertible(
          "operator_matrix: relation is not the graph of an everywhere-defined "
          "operator");
    lin::require_invertible(top, "operator_matrix");
    return second_block() * top.partialPivLu().solve(
                                MatrixXcd::Identity(n1, n1));
  }
};

struct RelationParts {
  MatrixXcd dom;  // first components that occur
  MatrixXcd ran;  // second components that occur
  MatrixXcd ker;  // first components paired with zero
  MatrixXcd mul;  // second components paired with zero (multivalued part)
};

inline RelationParts relation_parts(const LinearRelation& r) {
  const MatrixXcd top = r.first_block();
  const MatrixXcd bot = r.second_block();
  RelationParts p;
  p.dom = lin::orthonormalize(top);
  p.ran = lin::orthonormalize(bot);
  p.ker = lin::orthonormalize(top * lin::null_space(bot));
  p.mul = lin::orthonormalize(bot * lin::null_space(top));
  return p;
}

// Adjoint relation with respect to a dual pairing on each ambient factor:
//   R* = {(u, v) : pair2(u, y) = pair1(v, x) for all (x, y) in R},
// a subspace of the two functional-side spaces in swapped order (n2, n1).
// Apply it twice with the flipped pairings to get back to the original
// coordinates; with canonical pairings that double application is the
// identity on subspaces.
inline LinearRelation adjoint_relation(const LinearRelation& r,
                                       const DualPairing& pair1,
                                       const DualPairing& pair2) {
  if (pair1.dim != r.n1 || pair2.dim != r.n2)
    throw IndexSetMismatch("adjoint_relation: pairing dimensions do not match");
  // One linear condition per basis column (x; y) of R, acting on stacked
  // (u; v):  conj(M2 y)^T u - conj(M1 x)^T v = 0.
  MatrixXcd cond(r.dim(), r.n2 + r.n1);
  cond.leftCols(r.n2) = (pair2.matrix * r.second_block()).adjoint();
  cond.rightCols(r.n1) = -(pair1.matrix * r.first_block()).adjoint();
  return LinearRelation{r.n2, r.n1, lin::null_space(cond)};
}

// ── change of pairing ───────────────────────────────────────────────────────

struct ChangeOfPairingReport {
  MatrixXcd adjoint_by_definition;  // from the annihilator computation
  MatrixXcd adjoint_by_formula;     // psi1 * A^H * psi2^{-1}
  double residual = 0.0;
  double tolerance_used = 0.0;
  bool pass = false;
};

// The adjoint of a matrix A with respect to the pairings induced by the
// invertible maps psi1 (domain side) and psi2 (range side) equals the
// conjugate-transpose adjoint conjugated by the maps:
//   A^{*,induced} = psi1 A^H psi2^{-1}.
// Both sides are computed independently and compared entrywise.
inline ChangeOfPairingReport change_of_pairing_check(
    const MatrixXcd& a, const MatrixXcd& psi1, const MatrixXcd& psi2,
    const TolerancePolicy& tol = TolerancePolicy{}) {
  if (psi1.rows() != a.cols() || psi2.rows() != a.rows())
    throw IndexSetMismatch("change_of_pairing_check: dimension mismatch");
  lin::require_invertible(psi1, "change_of_pairing_check psi1");
  lin::require_invertible(psi2, "change_of_pairing_check psi2");

  const LinearRelation adj = adjoint_relation(
      LinearRelation::graph(a), DualPairing::induced_by(psi1),
      DualPairing::induced_by(psi2));

  ChangeOfPairingReport rep;
  rep.adjoint_by_definition = adj.operator_matrix();
  rep.adjoint_by_formula =
      psi1 * a.adjoint() *
      psi2.partialPivLu().solve(MatrixXcd::Identity(psi2.rows(), psi2.rows()));
  rep.residual = (rep.adjoint_by_definition - rep.adjoint_by_formula)
                     .cwiseAbs()
                     .maxCoeff();
  rep.tolerance_used = tol.algebraic_tol * lin::condition_number(psi1) *
                       lin::condition_number(psi2);
  rep.pass = rep.residual <= rep.tolerance_used;
  return rep;
}

// ── positivity of I + T*T ───────────────────────────────────────────────────

struct VonNeumannReport {
  double hermitian_residual = 0.0;   // of T*T and TT*
  double min_eig_left = 0.0;         // smallest eigenvalue of I + T*T
  double min_eig_right = 0.0;        // smallest eigenvalue of I + TT*
  double solve_residual = 0.0;       // ||(I+T*T)x - h|| / ||h|| for random h
  std::string note;
  bool pass = false;
};

// For any matrix T the operators I + T*T and I + TT* are self-adjoint and
// boundedly invertible with spectrum in [1, inf). The solve probe certifies
// invertibility constructively. In finite dimension every subspace is closed,
// so the domain of T*T is automatically a core of T; the report records that
// fact instead of simulating topology.
inline VonNeumannReport von_neumann_check(const MatrixXcd& t,
                                          const TolerancePolicy& tol =
                                              TolerancePolicy{},
                                          std::uint64_t seed = 0) {
  VonNeumannReport rep;
  const MatrixXcd left =
      MatrixXcd::Identity(t.cols(), t.cols()) + t.adjoint() * t;
  const MatrixXcd right =
      MatrixXcd::Identity(t.rows(), t.rows()) + t * t.adjoint();

  const double scale = std::max(1.0, left.cwiseAbs().maxCoeff());
  rep.hermitian_residual =
      std::max((left - left.adjoint()).cwiseAbs().maxCoeff(),
               (right - right.adjoint()).cwiseAbs().maxCoeff()) /
      scale;

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es_left(left);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es_right(right);
  rep.min_eig_left = es_left.eigenvalues().minCoeff();
  rep.min_eig_right = es_right.eigenvalues().minCoeff();

  Rng rng(seed == 0 ? subseed(23, "von-neumann-probe") : seed);
  const VectorXcd h = lin::random_matrix(rng, t.cols(), 1);
  const VectorXcd x = left.llt().solve(h);
  rep.solve_residual = (left * x - h).norm() / std::max(1.0, h.norm());

  rep.note =
      "finite dimension: dom(T*T) is all of the domain space, hence a core of T";
  const double eig_tol = tol.algebraic_tol * scale;
  rep.pass = rep.hermitian_residual <= tol.algebraic_tol &&
             rep.min_eig_left >= 1.0 - eig_tol &&
             rep.min_eig_right >= 1.0 - eig_tol &&
             rep.solve_residual <= tol.algebraic_tol * scale;
  return rep;
}

// ── Cesaro selection: weak decay to strong decay of averages ────────────────

struct CesaroResult {
  std::vector<std::size_t> indices;  // zero-based positions into the input
  double cesaro_norm = 0.0;          // ||(1/N) sum of selected||_0
  double max_norm = 0.0;             // C = max pivot norm over the selection
  double bound = 0.0;                // sqrt(C^2/N + ln(N)/N)
};

// Greedily picks N members of the sequence so that each new pick has pairwise
// pivot inner products of modulus at most 1/k with all earlier picks (k = its
// position in the selection, first pick unconstrained). Averaging such a
// selection beats the naive triangle inequality: since any norm-bounded,
// weakly vanishing sequence admits these picks (norm-boundedness itself being
// automatic for weakly convergent sequences), the Cesaro mean of the selection
// is small in norm:
//   cesaro_norm^2 <= C^2/N + ln(N)/N.
// Throws SelectionExhausted carrying the partial selection when the scan runs
// off the end of the sequence.
inline CesaroResult cesaro_select(const std::vector<CoeffVector>& vectors,
                                  std::size_t n_pick) {
  if (n_pick == 0)
    throw std::invalid_argument("cesaro_select: N must be positive");
  for (std::size_t i = 1; i < vectors.size(); ++i)
    require_same_index_set(vectors[0].index_set(), vectors[i].index_set(),
                           "cesaro_select");

  std::vector<std::size_t> picked;
  picked.reserve(n_pick);
  std::size_t scan = 0;
  while (picked.size() < n_pick) {
    const std::size_t k = picked.size() + 1;  // position being filled
    bool found = false;
    for (; scan < vectors.size(); ++scan) {
      bool admissible = true;
      for (const std::size_t j : picked) {
        if (std::abs(pivot_inner(vectors[scan], vectors[j])) >
            1.0 / static_cast<double>(k)) {
          admissible = false;
          break;
        }
      }
      if (admissible) {
        picked.push_back(scan);
        ++scan;
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "cesaro_select: sequence exhausted after " << picked.size()
         << " of " << n_pick << " picks";
      throw SelectionExhausted(os.str(), picked);
    }
  }

  CesaroResult res;
  res.indices = std::move(picked);
  CoeffVector sum(vectors[0].index_set());
  for (const std::size_t idx : res.indices) {
    sum = vec_axpy(cplx(1.0, 0.0), sum, vectors[idx]);
    res.max_norm = std::max(res.max_norm, pivot_norm(vectors[idx]));
  }
  const double n = static_cast<double>(n_pick);
  res.cesaro_norm = pivot_norm(sum) / n;
  res.bound = std::sqrt(res.max_norm * res.max_norm / n + std::log(n) / n);
  return res;
}

}  // namespace qgt
