#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/rng.hpp"
#include "qgt/sampling.hpp"

namespace qgt {

// ── the triple ──────────────────────────────────────────────────────────────
//
// A quasi Gelfand triple (X_+, X_0, X_-) around the coefficient pivot space,
// encoded entirely by its Gram operator:
//
//   ||f||_+ = ||G^{1/2} f||_0        ||g||_- = ||G^{-1/2} g||_0
//
// The embeddings iota_+ and iota_- act as the identity on finite-support
// representatives (domains are identified with ranges), so membership is a
// norm-finiteness question and the dual pairing restricts to the pivot inner
// product.
struct QuasiTriple {
  GramOperator gram;
  TolerancePolicy tolerance;
};

inline QuasiTriple make_triple(GramOperator g, TolerancePolicy tol = {}) {
  tol.validate();
  validate_gram(g);  // throws NotSelfAdjoint / NotInjective on bad operators
  return QuasiTriple{std::move(g), tol};
}

// ── norms and inner products ────────────────────────────────────────────────

inline double plus_norm(const QuasiTriple& t, const CoeffVector& f) {
  return pivot_norm(gram_apply(t.gram, f, 0.5));
}

inline double minus_norm(const QuasiTriple& t, const CoeffVector& g) {
  return pivot_norm(gram_apply(t.gram, g, -0.5));
}

inline cplx plus_inner(const QuasiTriple& t, const CoeffVector& f,
                       const CoeffVector& g) {
  return pivot_inner(gram_apply(t.gram, f, 0.5), gram_apply(t.gram, g, 0.5));
}

inline cplx minus_inner(const QuasiTriple& t, const CoeffVector& f,
                        const CoeffVector& g) {
  return pivot_inner(gram_apply(t.gram, f, -0.5), gram_apply(t.gram, g, -0.5));
}

// Every finite-support vector lies in both D_+ and D_-; the verdict exists so
// callers can watch the norms grow along vector families, which is where the
// discontinuity of the embeddings becomes visible.
struct MembershipVerdict {
  bool in_d_plus = true;
  bool in_d_minus = true;
  double plus_norm = 0.0;
  double minus_norm = 0.0;
};

inline MembershipVerdict membership(const QuasiTriple& t, const CoeffVector& v) {
  return MembershipVerdict{true, true, plus_norm(t, v), minus_norm(t, v)};
}

// ── dual pairing and duality map ────────────────────────────────────────────

// <g, f>_{X_-, X_+}: on finite-support representatives this *is* the pivot
// inner product — that identity is the defining property of the triple.
inline cplx pairing(const QuasiTriple& t, const CoeffVector& g,
                    const CoeffVector& f) {
  require_same_index_set(g.index_set(), t.gram.index_set(), "pairing");
  return pivot_inner(g, f);
}

enum class PsiDirection { forward, inverse };

// The duality map Psi: X_- -> X_+ with <g,f>_{X_-,X_+} = <Psi g, f>_+, a
// unitary realized by G^{-1}; its inverse is G.
inline CoeffVector duality_map_psi(const QuasiTriple& t, const CoeffVector& g,
                                   PsiDirection dir) {
  return gram_apply(t.gram, g, dir == PsiDirection::forward ? -1.0 : 1.0);
}

// ── pivot splitting: D_+ + D_- is all of X_0 ───────────────────────────────

struct PivotSplit {
  CoeffVector f;  // D_+ part
  CoeffVector g;  // D_- part
};

namespace detail {

// Exact rounding error of the floating-point sum a + b = s (Knuth's
// two-term recovery; valid for any operand magnitudes in round-to-nearest).
inline double sum_error(double a, double b, double s) {
  const double bv = s - a;
  const double av = s - bv;
  return (a - av) + (b - bv);
}

// Write c = f + g exactly (as real numbers, hence also under a rounded
// final addition) with g as close to g_req as exactness permits. One rounded
// subtraction fixes f; in binary round-to-nearest the complement c - f is
// then exactly representable whenever |g| <= |c|, so after at most two
// relaxation steps a magnitude clamp makes the pair exact. Components where
// the requested part overshoots the whole (possible for dense operators,
// whose spectral calculus mixes coordinates) have no exact pair near g_req
// at all: every representable pair at that magnitude lives on a grid
// coarser than c's trailing bits. With clamp_to_exact = false those
// components instead keep g near g_req and accept a half-ulp reassembly
// error, which callers that need the split to stay close to the spectral
// calculus (rather than bit-exact) prefer.
inline void exact_scalar_split(double c, double g_req, double& f_out,
                               double& g_out, bool clamp_to_exact = true) {
  double g = g_req;
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (attempt == 2) {
      if (!clamp_to_exact) break;
      g = std::copysign(std::min(std::abs(g_req), std::abs(c)), g_req);
    }
    const double f = c - g;
    const double h = c - f;
    const double s = f + h;
    if (s == c && sum_error(f, h, s) == 0.0) {
      f_out = f;
      g_out = h;
      return;
    }
    g = h;
  }
  f_out = c - g;  // reached only without clamping: nearest half-ulp pair
  g_out = g;
}

}  // namespace detail

// x = f + g with g = (I + G^{-1})^{-1} x and f = G^{-1} g. The sum f + g
// reproduces x bit-for-bit by construction; g agrees with the spectral
// calculus value up to rounding wherever an exact pair exists there, and
// f = G^{-1} g holds up to rounding, which the tests check separately.
inline PivotSplit pivot_split(const QuasiTriple& t, const CoeffVector& x) {
  require_same_index_set(x.index_set(), t.gram.index_set(), "pivot_split");
  const CoeffVector spectral =
      t.gram.apply_calculus(x, [](double lam) { return lam / (1.0 + lam); });
  CoeffVector f(x.index_set());
  CoeffVector g(x.index_set());
  std::map<std::int64_t, bool> support;
  for (const auto& [i, c] : x.entries()) support[i] = true;
  for (const auto& [i, c] : spectral.entries()) support[i] = true;
  for (const auto& [i, unused] : support) {
    const cplx c = x.at(i);
    const cplx req = spectral.at(i);
    double fre = 0.0, gre = 0.0, fim = 0.0, gim = 0.0;
    detail::exact_scalar_split(c.real(), req.real(), fre, gre);
    detail::exact_scalar_split(c.imag(), req.imag(), fim, gim);
    f.set(i, cplx(fre, fim));
    g.set(i, cplx(gre, gim));
  }
  return PivotSplit{std::move(f), std::move(g)};
}

// ── Gram recovery: the triple -> operator direction of the bijection ────────

// plus_form is a black box evaluating the X_+ inner product on basis pairs
// (e_i, e_j), 1-based. Since <G e_i, e_j>_0 = (G e_i)_j, the matrix entry
// G(j,i) is plus_form(i,j). hermitian_tol is relative to the largest
// evaluated magnitude.
inline GramOperator recover_gram(
    const std::function<cplx(std::int64_t, std::int64_t)>& plus_form,
    std::int64_t dim, double hermitian_tol = 1e-9) {
  if (dim <= 0) throw Error("recover_gram: dim must be positive");
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t i = 1; i <= dim; ++i)
    for (std::int64_t j = 1; j <= dim; ++j) m(j - 1, i - 1) = plus_form(i, j);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= hermitian_tol * scale))
    throw NotSelfAdjoint("recover_gram: form asymmetry " + std::to_string(asym) +
                         " exceeds tolerance");
  GramOperator g = GramOperator::dense(m, hermitian_tol);
  validate_gram(g);  // NotInjective when the form is not positive definite
  return g;
}

// Convenience: the X_+ inner-product black box induced by a triple.
inline std::function<cplx(std::int64_t, std::int64_t)> induced_plus_form(
    const QuasiTriple& t) {
  return [&t](std::int64_t i, std::int64_t j) {
    const IndexSet set = t.gram.index_set();
    return plus_inner(t, CoeffVector::basis(set, i), CoeffVector::basis(set, j));
  };
}

// ── dual-norm oracle ────────────────────────────────────────────────────────

// Brute-force witness for ||g||_- = sup |<g,f>_0| / ||f||_+. The candidate
// set contains the analytic maximizer f* = G^{-1} g (where the sup is
// attained) plus seeded random probes supported inside supp(g) with up to 3
// extra indices. The result can exceed the closed form only by rounding at
// f*; every genuine probe stays strictly below.
inline double minus_norm_oracle(const QuasiTriple& t, const CoeffVector& g,
                                std::int64_t trials, std::uint64_t seed) {
  if (g.empty()) throw EmptyVector("minus_norm_oracle: empty vector");
  const IndexSet set = g.index_set();
  require_same_index_set(set, t.gram.index_set(), "minus_norm_oracle");

  const auto ratio = [&](const CoeffVector& f) -> double {
    const double denom = plus_norm(t, f);
    if (denom == 0.0) return 0.0;
    return std::abs(pivot_inner(g, f)) / denom;
  };

  double best = ratio(gram_apply(t.gram, g, -1.0));

  std::int64_t window = 8;
  for (const auto& [i, c] : g.entries())
    window = std::max<std::int64_t>(window, 2 * std::llabs(i));

  Rng rng(seed);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CoeffVector f(set);
    for (const auto& [i, c] : g.entries())
      if (rng.next_u64() & 1u) f.set(i, rng.next_complex_gaussian());
    const std::int64_t extras = rng.next_int(0, 3);
    for (std::int64_t k = 0; k < extras; ++k)
      f.set(random_index(rng, set, window), rng.next_complex_gaussian());
    if (f.empty()) continue;
    best = std::max(best, ratio(f));
  }
  return best;
}

// ── pairing-identity check ──────────────────────────────────────────────────

struct PairingCheckReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_residual_pivot = 0.0;  // |<g,f>_{X_-,X_+} - <g,f>_0|
  double max_residual_plus = 0.0;   // |<g,f>_{X_-,X_+} - <Psi g, f>_+|
  double tolerance_used = 0.0;
  bool pass = false;
};

// Draws seeded random finite-support pairs and checks the two pairing
// identities that define the triple: the pairing extends the pivot inner
// product, and Psi transports it onto the X_+ inner product.
inline PairingCheckReport check_pairing_identity(const QuasiTriple& t,
                                                 std::size_t samples,
                                                 std::uint64_t seed) {
  PairingCheckReport rep;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  const IndexSet set = t.gram.index_set();
  double kappa = 1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const CoeffVector g = random_vector(rng, set);
    const CoeffVector f = random_vector(rng, set);
    const cplx pair = pairing(t, g, f);
    const cplx pivot = pivot_inner(g, f);
    const cplx plus = plus_inner(t, duality_map_psi(t, g, PsiDirection::forward), f);
    rep.max_residual_pivot = std::max(rep.max_residual_pivot, std::abs(pair - pivot));
    rep.max_residual_plus = std::max(rep.max_residual_plus, std::abs(pair - plus));
    kappa = std::max(kappa, t.gram.condition_for({&g, &f}));
  }
  rep.tolerance_used = t.tolerance.scaled_algebraic(kappa);
  rep.pass = rep.max_residual_pivot <= t.tolerance.algebraic_tol &&
             rep.max_residual_plus <= rep.tolerance_used;
  return rep;
}

}  // namespace qgt
