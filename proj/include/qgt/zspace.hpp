#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/rng.hpp"
#include "qgt/sampling.hpp"
#include "qgt/triple.hpp"

namespace qgt {

// ── Z_+ = D_+ ∩ D_- and Z_- = X_+ + X_- ────────────────────────────────────
//
// Z_+ carries the sum inner product <.,.>_+ + <.,.>_-; on a diagonal operator
// the weight per coordinate is lambda + 1/lambda >= 2. Z_- is the hull
// X_+ + X_-, represented by a pair (plus_part, minus_part) whose sum is the
// element; the representation is unique only up to shifts by Z_+, so equality
// goes through canonical splits. (Z_+, X_0, Z_-) is an ordinary Gelfand
// triple: the chain of embeddings is continuous with constant 1 both ways.

struct ZPlusElement {
  CoeffVector vector;
  double z_plus_norm = 0.0;  // cached at construction
};

struct ZMinusElement {
  CoeffVector plus_part;   // lives in X_+
  CoeffVector minus_part;  // lives in X_-

  CoeffVector sum() const {
    return vec_axpy(cplx(1.0, 0.0), plus_part, minus_part);
  }

  static ZMinusElement from_pivot(const CoeffVector& h) {
    return ZMinusElement{h, CoeffVector(h.index_set())};
  }
};

inline double z_plus_norm(const QuasiTriple& t, const CoeffVector& z) {
  return pivot_norm(t.gram.apply_calculus(
      z, [](double lam) { return std::sqrt(lam + 1.0 / lam); }));
}

inline ZPlusElement make_z_plus(const QuasiTriple& t, CoeffVector z) {
  const double n = z_plus_norm(t, z);
  return ZPlusElement{std::move(z), n};
}

// ||h||_{Z_-} = ||(G + G^{-1})^{-1/2} (f+g)||_0: the dual norm of Z_+ in
// closed form, via the duality map Phi = (G + G^{-1})^{-1}.
inline double z_minus_norm(const QuasiTriple& t, const ZMinusElement& h) {
  const CoeffVector s = h.sum();
  return pivot_norm(t.gram.apply_calculus(
      s, [](double lam) { return 1.0 / std::sqrt(lam + 1.0 / lam); }));
}

// ── canonical split: h = Psi Phi h + Psi^{-1} Phi h ─────────────────────────

// plus_part = G^{-1}(G+G^{-1})^{-1} h (weight 1/(lambda^2+1)), minus_part is
// the exact remainder h - plus_part (weight lambda^2/(lambda^2+1)). The parts
// come from the same exact scalar split as the pivot splitting but without
// the magnitude clamp: the Pythagoras identity below holds only at the
// spectral-calculus minimizer, so the parts must track it even on the rare
// dense-operator components that then cost a half-ulp reassembly error.
// Wherever an exact pair exists near the calculus values — always, for
// diagonal operators — the parts sum to h bit-for-bit. Pythagoras:
// ||h||_{Z_-}^2 = ||plus||_+^2 + ||minus||_-^2.
inline ZMinusElement canonical_split(const QuasiTriple& t, const CoeffVector& h) {
  require_same_index_set(h.index_set(), t.gram.index_set(), "canonical_split");
  const CoeffVector spectral = t.gram.apply_calculus(
      h, [](double lam) { return 1.0 / (lam * lam + 1.0); });
  CoeffVector plus(h.index_set());
  CoeffVector minus(h.index_set());
  std::set<std::int64_t> support;
  for (const auto& [i, c] : h.entries()) support.insert(i);
  for (const auto& [i, c] : spectral.entries()) support.insert(i);
  for (const std::int64_t i : support) {
    const cplx c = h.at(i);
    const cplx req = spectral.at(i);
    double mre = 0.0, pre = 0.0, mim = 0.0, pim = 0.0;
    detail::exact_scalar_split(c.real(), req.real(), mre, pre, false);
    detail::exact_scalar_split(c.imag(), req.imag(), mim, pim, false);
    plus.set(i, cplx(pre, pim));
    minus.set(i, cplx(mre, mim));
  }
  return ZMinusElement{std::move(plus), std::move(minus)};
}

// Quotient equality in Z_-: two (f,g) pairs represent the same element iff
// their sums' canonical splits agree coefficientwise (the difference is a
// Z_+ element cancelling between the parts).
inline bool z_minus_equal(const QuasiTriple& t, const ZMinusElement& a,
                          const ZMinusElement& b) {
  const ZMinusElement ca = canonical_split(t, a.sum());
  const ZMinusElement cb = canonical_split(t, b.sum());
  const CoeffVector dp = vec_axpy(cplx(-1.0, 0.0), ca.plus_part, cb.plus_part);
  const CoeffVector dm = vec_axpy(cplx(-1.0, 0.0), ca.minus_part, cb.minus_part);
  double scale = 1.0;
  for (const auto& [i, c] : ca.plus_part.entries())
    scale = std::max(scale, std::abs(c));
  for (const auto& [i, c] : ca.minus_part.entries())
    scale = std::max(scale, std::abs(c));
  double resid = 0.0;
  for (const auto& [i, c] : dp.entries()) resid = std::max(resid, std::abs(c));
  for (const auto& [i, c] : dm.entries()) resid = std::max(resid, std::abs(c));
  const double kappa =
      t.gram.condition_for({&ca.plus_part, &cb.plus_part, &ca.minus_part, &cb.minus_part});
  return resid <= t.tolerance.scaled_algebraic(kappa) * scale;
}

// ── optimal split: the infimum formula for the Z_- norm ─────────────────────

struct OptimalSplit {
  CoeffVector z_star;
  double value = 0.0;  // sqrt(||f+z*||_+^2 + ||g-z*||_-^2)
};

// Minimizes ||f+z||_+^2 + ||g-z||_-^2 over z in Z_+. The quadratic is
// strictly convex with normal equation (G + G^{-1}) z = G^{-1} g - G f,
// so per coordinate z* = (g - lambda^2 f) / (lambda^2 + 1); dense operators
// solve the same system through the eigenbasis. The attained value is the
// Z_- norm of (f,g).
inline OptimalSplit optimal_split(const QuasiTriple& t, const CoeffVector& f,
                                  const CoeffVector& g) {
  require_same_index_set(f.index_set(), g.index_set(), "optimal_split");
  require_same_index_set(f.index_set(), t.gram.index_set(), "optimal_split");
  const CoeffVector rhs = vec_axpy(cplx(-1.0, 0.0), gram_apply(t.gram, f, 1.0),
                                   gram_apply(t.gram, g, -1.0));
  CoeffVector z = t.gram.apply_calculus(
      rhs, [](double lam) { return lam / (lam * lam + 1.0); });
  const CoeffVector fz = vec_axpy(cplx(1.0, 0.0), z, f);
  const CoeffVector gz = vec_axpy(cplx(-1.0, 0.0), z, g);
  const double value = std::hypot(plus_norm(t, fz), minus_norm(t, gz));
  return OptimalSplit{std::move(z), value};
}

// ── dual-norm oracle for Z_- ────────────────────────────────────────────────

// Brute-force witness for ||h||_{Z_-} = sup |<f+g, z>_0| / ||z||_{Z_+}. The
// candidate set contains the analytic maximizer z* = Phi(f+g) plus seeded
// random probes.
inline double z_minus_norm_oracle(const QuasiTriple& t, const ZMinusElement& h,
                                  std::int64_t trials, std::uint64_t seed) {
  const CoeffVector s = h.sum();
  if (s.empty()) throw EmptyVector("z_minus_norm_oracle: empty combined support");

  const auto ratio = [&](const CoeffVector& z) -> double {
    const double denom = z_plus_norm(t, z);
    if (denom == 0.0) return 0.0;
    return std::abs(pivot_inner(s, z)) / denom;
  };

  double best = ratio(t.gram.apply_calculus(
      s, [](double lam) { return 1.0 / (lam + 1.0 / lam); }));

  std::int64_t window = 8;
  for (const auto& [i, c] : s.entries())
    window = std::max<std::int64_t>(window, 2 * std::llabs(i));

  Rng rng(seed);
  const IndexSet set = s.index_set();
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CoeffVector z(set);
    for (const auto& [i, c] : s.entries())
      if (rng.next_u64() & 1u) z.set(i, rng.next_complex_gaussian());
    const std::int64_t extras = rng.next_int(0, 3);
    for (std::int64_t k = 0; k < extras; ++k)
      z.set(random_index(rng, set, window), rng.next_complex_gaussian());
    if (z.empty()) continue;
    best = std::max(best, ratio(z));
  }
  return best;
}

// ── intersection theorem witness ────────────────────────────────────────────

struct IntersectionVerdict {
  bool equal = false;
  double functional_residual = 0.0;  // max probe disagreement
  double z_plus_norm = 0.0;          // finite certificate when equal
};

// Decides whether f (as an X_+ element) and g (as an X_- element) embed to
// the same functional on Z_+. Both embeddings evaluate through the pairing on
// probes, and on finite-support representatives the functionals agree exactly
// when the coefficient vectors do; when they agree, the common element lies
// in Z_+ and its finite norm is returned as the certificate.
inline IntersectionVerdict intersection_witness(const QuasiTriple& t,
                                                const CoeffVector& f,
                                                const CoeffVector& g) {
  require_same_index_set(f.index_set(), g.index_set(), "intersection_witness");
  IntersectionVerdict v;
  double scale = 1.0;
  for (const auto& [i, c] : f.entries()) scale = std::max(scale, std::abs(c));
  for (const auto& [i, c] : g.entries()) scale = std::max(scale, std::abs(c));
  // Probe with every basis vector that either support touches.
  std::set<std::int64_t> probes;
  for (const auto& [i, c] : f.entries()) probes.insert(i);
  for (const auto& [i, c] : g.entries()) probes.insert(i);
  for (const std::int64_t i : probes) {
    const CoeffVector e = CoeffVector::basis(f.index_set(), i);
    v.functional_residual =
        std::max(v.functional_residual,
                 std::abs(pairing(t, f, e) - pairing(t, g, e)));
  }
  v.equal = v.functional_residual <= t.tolerance.algebraic_tol * scale;
  if (v.equal) v.z_plus_norm = z_plus_norm(t, f);
  return v;
}

}  // namespace qgt
