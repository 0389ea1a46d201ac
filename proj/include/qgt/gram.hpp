#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/interval.hpp"
#include "qgt/weights.hpp"

namespace qgt {

// ── dense helpers ───────────────────────────────────────────────────────────

inline Eigen::VectorXcd to_eigen(const CoeffVector& f, std::int64_t n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  for (const auto& [i, c] : f.entries()) v(i - 1) = c;
  return v;
}

// Exact zeros are pruned on the way back, preserving the canonical-form
// invariant of CoeffVector.
inline CoeffVector from_eigen(const IndexSet& set, const Eigen::VectorXcd& v) {
  CoeffVector out(set);
  for (std::int64_t i = 0; i < v.size(); ++i) out.set(i + 1, v(i));
  return out;
}

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending, columns
// unitary. The solver behind it is replaceable: whatever produces it must
// meet the residual bound checked in `validate`, otherwise construction is
// rejected.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  static EigenDecomposition compute(const Eigen::MatrixXcd& herm) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success)
      throw Error("eigendecomposition failed to converge");
    EigenDecomposition e{solver.eigenvalues(), solver.eigenvectors()};
    e.validate(herm);
    return e;
  }

  // Per-eigenpair residual bound ||G v - lambda v|| <= 64 n ulp ||G||, with
  // ||G|| the spectral norm (max |lambda| on a Hermitian matrix).
  void validate(const Eigen::MatrixXcd& herm) const {
    const auto n = herm.rows();
    const double norm_g =
        std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(n - 1)));
    const double bound = 64.0 * static_cast<double>(n) *
                         std::numeric_limits<double>::epsilon() *
                         std::max(norm_g, 1e-300);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double resid =
          (herm * eigenvectors.col(k) - eigenvalues(k) * eigenvectors.col(k))
              .norm();
      if (!(resid <= bound))
        throw Error("eigendecomposition residual " + std::to_string(resid) +
                    " exceeds bound " + std::to_string(bound));
    }
  }
};

// ── the Gram operator ───────────────────────────────────────────────────────
//
// One positive self-adjoint injective operator G encodes an entire triple:
// ||f||_+ = ||G^{1/2} f||_0 and ||g||_- = ||G^{-1/2} g||_0. Three
// representations are supported:
//
//   analytic_diagonal  diagonal in the coordinate basis of Z\{0}, weights
//                      given by a WeightSpec formula (infinite dimensional)
//   finite_diagonal    diagonal with explicit lambdas on indices 1..n
//   dense_spd          full Hermitian matrix on indices 1..n with a cached
//                      eigendecomposition
//
// Immutable after construction; the dense eigendecomposition is computed once
// so all later use is read-only.
class GramOperator {
 public:
  enum class Kind { analytic_diagonal, finite_diagonal, dense_spd };

  static GramOperator analytic(WeightSpec weight) {
    GramOperator g;
    g.kind_ = Kind::analytic_diagonal;
    g.weight_ = std::move(weight);
    return g;
  }

  static GramOperator finite_diagonal(std::vector<double> lambdas) {
    if (lambdas.empty()) throw Error("finite_diagonal: empty spectrum");
    GramOperator g;
    g.kind_ = Kind::finite_diagonal;
    g.lambdas_ = std::move(lambdas);
    return g;
  }

  static GramOperator identity(std::int64_t n) {
    return finite_diagonal(std::vector<double>(static_cast<std::size_t>(n), 1.0));
  }

  // hermitian_tol bounds the tolerated asymmetry relative to the largest
  // entry; the stored matrix is the symmetrized (G + G^H)/2.
  static GramOperator dense(const Eigen::MatrixXcd& m,
                            double hermitian_tol = 1e-12) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw Error("dense Gram operator must be square and nonempty");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= hermitian_tol * scale))
      throw NotSelfAdjoint("dense Gram operator: asymmetry " +
                           std::to_string(asym) + " exceeds " +
                           std::to_string(hermitian_tol * scale));
    GramOperator g;
    g.kind_ = Kind::dense_spd;
    auto data = std::make_shared<DenseData>();
    data->matrix = (m + m.adjoint()) / 2.0;
    data->hermitian_residual = asym;
    data->eigen = EigenDecomposition::compute(data->matrix);
    g.dense_ = std::move(data);
    return g;
  }

  Kind kind() const { return kind_; }
  bool is_diagonal() const { return kind_ != Kind::dense_spd; }

  IndexSet index_set() const {
    switch (kind_) {
      case Kind::analytic_diagonal:
        return IndexSet::symmetric();
      case Kind::finite_diagonal:
        return IndexSet::finite(static_cast<std::int64_t>(lambdas_.size()));
      case Kind::dense_spd:
        return IndexSet::finite(dense_->matrix.rows());
    }
    throw Error("unreachable");
  }

  // Finite kinds only.
  std::int64_t dim() const {
    if (kind_ == Kind::finite_diagonal)
      return static_cast<std::int64_t>(lambdas_.size());
    if (kind_ == Kind::dense_spd) return dense_->matrix.rows();
    throw Error("dim: analytic-diagonal operators are infinite dimensional");
  }

  const WeightSpec& weight_spec() const {
    if (kind_ != Kind::analytic_diagonal)
      throw Error("weight_spec: not an analytic-diagonal operator");
    return weight_;
  }

  const std::vector<double>& lambdas() const {
    if (kind_ != Kind::finite_diagonal)
      throw Error("lambdas: not a finite-diagonal operator");
    return lambdas_;
  }

  const Eigen::MatrixXcd& matrix() const { return dense_checked().matrix; }
  const EigenDecomposition& eigen() const { return dense_checked().eigen; }
  double hermitian_residual() const {
    return kind_ == Kind::dense_spd ? dense_->hermitian_residual : 0.0;
  }

  // Diagonal weight at index i (diagonal kinds).
  double weight_at(std::int64_t i) const {
    switch (kind_) {
      case Kind::analytic_diagonal:
        return weight_.weight(i);
      case Kind::finite_diagonal: {
        if (i < 1 || i > static_cast<std::int64_t>(lambdas_.size()))
          throw IndexSetMismatch("weight_at: index " + std::to_string(i) +
                                 " outside finite:" +
                                 std::to_string(lambdas_.size()));
        return lambdas_[static_cast<std::size_t>(i - 1)];
      }
      case Kind::dense_spd:
        throw Error("weight_at: dense operator is not diagonal");
    }
    throw Error("unreachable");
  }

  double sqrt_weight_at(std::int64_t i) const {
    if (kind_ == Kind::analytic_diagonal) return weight_.sqrt_weight(i);
    return std::sqrt(weight_at(i));
  }

  // Structural spectrum bounds. For finite kinds these are the extreme
  // eigenvalues; for analytic families they are the inf/sup over all of
  // Z\{0}, which may be 0 or inf (unbounded weight families).
  double min_weight() const {
    switch (kind_) {
      case Kind::finite_diagonal:
        return *std::min_element(lambdas_.begin(), lambdas_.end());
      case Kind::dense_spd:
        return dense_->eigen.eigenvalues(0);
      case Kind::analytic_diagonal:
        return analytic_bounds().first;
    }
    throw Error("unreachable");
  }

  double max_weight() const {
    switch (kind_) {
      case Kind::finite_diagonal:
        return *std::max_element(lambdas_.begin(), lambdas_.end());
      case Kind::dense_spd:
        return dense_->eigen.eigenvalues(dense_->matrix.rows() - 1);
      case Kind::analytic_diagonal:
        return analytic_bounds().second;
    }
    throw Error("unreachable");
  }

  double condition_number() const {
    const double lo = min_weight();
    const double hi = max_weight();
    if (!(lo > 0.0)) return kInf;
    return hi == kInf ? kInf : hi / lo;
  }

  // Condition number restricted to the weights a computation actually
  // touches. For diagonal kinds this is max/min over the union of supports;
  // dense operators mix coordinates, so the full condition number applies.
  double condition_for(std::initializer_list<const CoeffVector*> vectors) const {
    if (kind_ == Kind::dense_spd) return condition_number();
    double lo = kInf, hi = 0.0;
    for (const CoeffVector* v : vectors) {
      for (const auto& [i, c] : v->entries()) {
        const double w = weight_at(i);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    }
    if (hi == 0.0 || !(lo > 0.0)) return 1.0;
    return std::max(1.0, hi / lo);
  }

  // Apply the scalar function fn through the functional calculus: entrywise
  // fn(w(i)) for diagonal kinds, V diag(fn(lambda)) V^H for dense. Everything
  // the triple machinery needs (powers, (G + G^{-1})^{-1}, ...) reduces to
  // this one primitive.
  CoeffVector apply_calculus(const CoeffVector& f,
                             const std::function<double(double)>& fn) const {
    require_same_index_set(f.index_set(), index_set(), "apply_calculus");
    if (is_diagonal()) {
      CoeffVector out(f.index_set());
      for (const auto& [i, c] : f.entries()) out.set(i, fn(weight_at(i)) * c);
      return out;
    }
    const auto& eig = dense_->eigen;
    const std::int64_t n = dense_->matrix.rows();
    Eigen::VectorXcd x = to_eigen(f, n);
    Eigen::VectorXcd y = eig.eigenvectors.adjoint() * x;
    for (Eigen::Index k = 0; k < n; ++k) y(k) *= fn(eig.eigenvalues(k));
    return from_eigen(f.index_set(), eig.eigenvectors * y);
  }

 private:
  struct DenseData {
    Eigen::MatrixXcd matrix;
    EigenDecomposition eigen;
    double hermitian_residual = 0.0;
  };

  GramOperator() = default;

  const DenseData& dense_checked() const {
    if (kind_ != Kind::dense_spd)
      throw Error("operation requires a dense Gram operator");
    return *dense_;
  }

  // inf/sup of the weight family over all indices.
  std::pair<double, double> analytic_bounds() const {
    if (weight_.kind() == WeightSpec::Kind::table) {
      double lo = weight_.default_weight();
      double hi = weight_.default_weight();
      for (const auto& [i, w] : weight_.entries()) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
      return {lo, hi};
    }
    if (weight_.alpha() == 0.0) return {1.0, 1.0};
    // Power families with nonzero exponent are unbounded on at least one
    // side; mirrored ones also accumulate at zero.
    if (weight_.mirrored()) return {0.0, kInf};
    return {1.0, kInf};
  }

  Kind kind_ = Kind::finite_diagonal;
  WeightSpec weight_ = WeightSpec::paper_ell2();
  std::vector<double> lambdas_;
  std::shared_ptr<const DenseData> dense_;
};

// ── functional calculus entry points ────────────────────────────────────────

// G^p f for the four powers the triple machinery uses. Negative powers
// require a strictly positive spectrum; other exponents are a programming
// error, not a domain error.
inline CoeffVector gram_apply(const GramOperator& g, const CoeffVector& f,
                              double power) {
  if (power != 1.0 && power != 0.5 && power != -1.0 && power != -0.5)
    throw std::invalid_argument("gram_apply: power must be one of {1, 1/2, -1, -1/2}");
  if (power < 0.0 && g.kind() != GramOperator::Kind::analytic_diagonal &&
      !(g.min_weight() > 0.0))
    throw NotInjective(
        "gram_apply: negative power on an operator whose spectrum touches "
        "zero; split off ker G (X0 = ker G (+) cl ran G) and restrict first");
  return g.apply_calculus(
      f, [power](double lam) { return std::pow(lam, power); });
}

// ── spectral projections ────────────────────────────────────────────────────
//
// Orthogonal projection onto the spectral subspace of G^{1/2} for an interval
// union S on the sqrt(lambda) scale. Kept in the operator's own
// representation: an index predicate for diagonal kinds, a dense Hermitian
// idempotent for dense kinds.
class SpectralProjector {
 public:
  CoeffVector apply(const CoeffVector& f) const {
    require_same_index_set(f.index_set(), set_, "SpectralProjector::apply");
    if (dense_rank_ < 0) {
      CoeffVector out(f.index_set());
      for (const auto& [i, c] : f.entries())
        if (keeps_index(i)) out.set(i, c);
      return out;
    }
    return from_eigen(set_, matrix_ * to_eigen(f, set_.size()));
  }

  // Diagonal kinds: does coordinate i survive the projection?
  bool keeps_index(std::int64_t i) const {
    if (dense_rank_ >= 0)
      throw Error("keeps_index: dense projections are not coordinate masks");
    return intervals_.contains(gram_.sqrt_weight_at(i));
  }

  const IntervalSet& intervals() const { return intervals_; }
  const IndexSet& index_set() const { return set_; }
  bool is_dense() const { return dense_rank_ >= 0; }

  // Dense kinds only: the projection matrix and its rank.
  const Eigen::MatrixXcd& matrix() const {
    if (dense_rank_ < 0) throw Error("matrix: projection is a coordinate mask");
    return matrix_;
  }
  std::int64_t rank() const {
    if (dense_rank_ < 0) throw Error("rank: projection is a coordinate mask");
    return dense_rank_;
  }

 private:
  friend SpectralProjector spectral_projection(const GramOperator&,
                                               const IntervalSet&);

  SpectralProjector(GramOperator g, IntervalSet s, IndexSet set)
      : gram_(std::move(g)), intervals_(std::move(s)), set_(set) {}

  GramOperator gram_;
  IntervalSet intervals_;
  IndexSet set_;
  Eigen::MatrixXcd matrix_;      // dense kinds
  std::int64_t dense_rank_ = -1;  // -1 marks the coordinate-mask representation
};

inline SpectralProjector spectral_projection(const GramOperator& g,
                                             const IntervalSet& s) {
  if (s.empty()) throw InvalidInterval("spectral projection of an empty set");
  SpectralProjector p(g, s, g.index_set());
  if (g.kind() == GramOperator::Kind::dense_spd) {
    const auto& eig = g.eigen();
    const std::int64_t n = g.dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    std::int64_t rank = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      // Guard: the cut lives on the spectrum of G^{1/2}.
      const double lam = eig.eigenvalues(k);
      const double sq = lam > 0.0 ? std::sqrt(lam) : 0.0;
      if (s.contains(sq)) {
        acc += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
        ++rank;
      }
    }
    p.matrix_ = std::move(acc);
    p.dense_rank_ = rank;
  }
  return p;
}

inline SpectralProjector spectral_projection(const GramOperator& g,
                                             const Interval& iv) {
  return spectral_projection(g, IntervalSet(iv));
}

// ── validation ──────────────────────────────────────────────────────────────

struct GramValidation {
  double hermitian_residual = 0.0;
  double min_weight = 0.0;
  double max_weight = 0.0;
  double condition = 1.0;
  bool pass = false;
  std::string note;
};

// Hermitian residual, spectrum bounds, condition number. Finite kinds fail
// when the smallest eigenvalue is nonpositive or below 1e-14 of the largest;
// analytic families are checked structurally (every weight positive by
// formula or table inspection) since their spectra may legitimately
// accumulate at 0 or infinity.
inline GramValidation validate_gram(const GramOperator& g) {
  GramValidation r;
  r.hermitian_residual = g.hermitian_residual();
  r.min_weight = g.min_weight();
  r.max_weight = g.max_weight();
  r.condition = g.condition_number();

  if (g.kind() == GramOperator::Kind::analytic_diagonal) {
    // WeightSpec construction already rejects nonpositive table entries, and
    // power-family weights are positive for every index by the formula.
    r.pass = true;
    if (r.condition == kInf)
      r.note =
          "weights positive at every index; spectrum accumulates at 0 or "
          "infinity, so no global condition number exists";
    return r;
  }

  if (!(r.min_weight > 0.0))
    throw NotInjective(
        "Gram operator has nonpositive spectrum; it splits the pivot space as "
        "X0 = ker G (+) cl ran G, and restricting to cl ran G is the caller's "
        "explicit choice");
  if (r.min_weight < 1e-14 * r.max_weight)
    throw NotInjective(
        "Gram operator is numerically singular (min eigenvalue below "
        "1e-14 of max); treat it as having a kernel and restrict explicitly");
  r.pass = true;
  return r;
}

}  // namespace qgt
