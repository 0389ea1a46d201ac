#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgt/errors.hpp"

namespace qgt {

using cplx = std::complex<double>;

// ── index sets ──────────────────────────────────────────────────────────────
//
// Two kinds of coordinate domains appear: finite(n) with indices 1..n, and
// the two-sided integer lattice Z\{0} used by the weighted sequence-space
// instances. Index 0 never exists.
class IndexSet {
 public:
  enum class Kind { finite, symmetric_integers };

  static IndexSet finite(std::int64_t n) {
    if (n <= 0) throw Error("IndexSet::finite requires n >= 1");
    return IndexSet(Kind::finite, n);
  }
  static IndexSet symmetric() { return IndexSet(Kind::symmetric_integers, 0); }

  Kind kind() const { return kind_; }
  std::int64_t size() const { return n_; }  // meaningful for finite only

  bool contains(std::int64_t i) const {
    if (kind_ == Kind::finite) return i >= 1 && i <= n_;
    return i != 0;
  }

  bool operator==(const IndexSet& o) const {
    return kind_ == o.kind_ && (kind_ == Kind::symmetric_integers || n_ == o.n_);
  }
  bool operator!=(const IndexSet& o) const { return !(*this == o); }

  std::string describe() const {
    if (kind_ == Kind::finite) return "finite:" + std::to_string(n_);
    return "symmetric";
  }

 private:
  IndexSet(Kind k, std::int64_t n) : kind_(k), n_(n) {}
  Kind kind_;
  std::int64_t n_;
};

inline void require_same_index_set(const IndexSet& a, const IndexSet& b,
                                   const char* where) {
  if (a != b)
    throw IndexSetMismatch(std::string(where) + ": index sets " + a.describe() +
                           " and " + b.describe() + " differ");
}

// ── coefficient vectors ─────────────────────────────────────────────────────
//
// Finite-support coefficient vectors are the universal element representation:
// everything the triple machinery touches (elements of X_+, X_-, X_0, Z_+) is
// carried by one of these. Invariants: every stored entry is nonzero (zeros
// are pruned eagerly, so equality is canonical and support size is a real
// complexity measure), and every index lies in the index set. std::map keeps
// iteration order deterministic, which the serializers rely on.
class CoeffVector {
 public:
  using Map = std::map<std::int64_t, cplx>;

  explicit CoeffVector(IndexSet set) : set_(set) {}

  CoeffVector(IndexSet set, std::initializer_list<std::pair<std::int64_t, cplx>> init)
      : set_(set) {
    for (const auto& [i, v] : init) this->set(i, v);
  }

  // Unit coordinate vector a·e_i.
  static CoeffVector basis(IndexSet set, std::int64_t i, cplx a = cplx(1.0, 0.0)) {
    CoeffVector v(set);
    v.set(i, a);
    return v;
  }

  const IndexSet& index_set() const { return set_; }
  const Map& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  cplx at(std::int64_t i) const {
    const auto it = entries_.find(i);
    return it == entries_.end() ? cplx(0.0, 0.0) : it->second;
  }

  // Insert/overwrite one coefficient; storing an exact zero removes the entry.
  void set(std::int64_t i, cplx v) {
    if (!set_.contains(i))
      throw IndexSetMismatch("CoeffVector: index " + std::to_string(i) +
                             " outside " + set_.describe());
    if (v == cplx(0.0, 0.0)) {
      entries_.erase(i);
    } else {
      entries_[i] = v;
    }
  }

  bool operator==(const CoeffVector& o) const {
    return set_ == o.set_ && entries_ == o.entries_;
  }
  bool operator!=(const CoeffVector& o) const { return !(*this == o); }

 private:
  IndexSet set_;
  Map entries_;
};

// ── pivot-space operations ──────────────────────────────────────────────────

// <f, g>_{X_0} = sum_i f_i conj(g_i): linear in the first slot, antilinear in
// the second. Every pairing in the library reduces to this on representatives.
inline cplx pivot_inner(const CoeffVector& f, const CoeffVector& g) {
  require_same_index_set(f.index_set(), g.index_set(), "pivot_inner");
  cplx acc(0.0, 0.0);
  const auto& a = f.entries();
  const auto& b = g.entries();
  // Walk the smaller support.
  if (a.size() <= b.size()) {
    for (const auto& [i, v] : a) {
      const auto it = b.find(i);
      if (it != b.end()) acc += v * std::conj(it->second);
    }
  } else {
    for (const auto& [i, v] : b) {
      const auto it = a.find(i);
      if (it != a.end()) acc += it->second * std::conj(v);
    }
  }
  return acc;
}

// a·f + g, with exact zero results pruned.
inline CoeffVector vec_axpy(cplx a, const CoeffVector& f, const CoeffVector& g) {
  require_same_index_set(f.index_set(), g.index_set(), "vec_axpy");
  CoeffVector out = g;
  for (const auto& [i, v] : f.entries()) out.set(i, a * v + out.at(i));
  return out;
}

inline double pivot_norm(const CoeffVector& f) {
  double acc = 0.0;
  for (const auto& [i, v] : f.entries()) acc += std::norm(v);
  return std::sqrt(acc);
}

// ── tolerances ──────────────────────────────────────────────────────────────
//
// algebraic_tol guards identities that hold in exact arithmetic; oracle_tol
// guards comparisons against brute-force search witnesses. When
// condition_scale is set, algebraic checks against an operator G are allowed
// to degrade by its condition number (square-root round trips lose about
// log2(kappa) bits).
struct TolerancePolicy {
  double algebraic_tol = 1e-12;
  double oracle_tol = 1e-9;
  bool condition_scale = true;

  TolerancePolicy() = default;
  TolerancePolicy(double algebraic, double oracle, bool scale = true)
      : algebraic_tol(algebraic), oracle_tol(oracle), condition_scale(scale) {
    validate();
  }

  void validate() const {
    if (algebraic_tol < 0 || oracle_tol < 0)
      throw Error("TolerancePolicy: tolerances must be nonnegative");
    if (algebraic_tol > oracle_tol)
      throw Error("TolerancePolicy: algebraic_tol must not exceed oracle_tol");
  }

  // Effective algebraic tolerance for checks involving an operator of
  // condition number kappa.
  double scaled_algebraic(double kappa) const {
    return condition_scale ? algebraic_tol * std::max(1.0, kappa)
                           : algebraic_tol;
  }
};

// ── grid functions ──────────────────────────────────────────────────────────
//
// Dense samples on a uniform grid over [0,1] with a midpoint quadrature
// weight; carrier for the discretized Lebesgue-exponent instance.
struct GridFunction {
  std::vector<cplx> values;
  double cell_weight = 1.0;

  GridFunction() = default;
  GridFunction(std::vector<cplx> vals, double weight)
      : values(std::move(vals)), cell_weight(weight) {
    if (values.empty()) throw Error("GridFunction: empty sample array");
    if (!(cell_weight > 0.0)) throw Error("GridFunction: cell_weight must be positive");
  }

  std::size_t grid_size() const { return values.size(); }
};

}  // namespace qgt
