#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgt/catalog.hpp"
#include "qgt/core.hpp"
#include "qgt/decomp.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/interval.hpp"
#include "qgt/relations.hpp"
#include "qgt/rng.hpp"
#include "qgt/sampling.hpp"
#include "qgt/triple.hpp"
#include "qgt/zspace.hpp"

namespace qgt {

// ── suite reports ───────────────────────────────────────────────────────────

struct SuiteReport {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  double tolerance_used = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;  // sub-seed actually used; replays the suite
  std::optional<CoeffVector> counterexample;
  std::string detail;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {
      "pairing",     "minus-norm-oracle", "gram-roundtrip",
      "pivot-split", "zspace",            "decomposition",
      "relations",   "cesaro",            "catalog-demos"};
  return names;
}

struct VerifyOptions {
  std::vector<std::string> suites;  // empty = all, in canonical order
  std::size_t samples = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    for (const auto& s : suites)
      if (std::find(known_suites().begin(), known_suites().end(), s) ==
          known_suites().end())
        throw ParseError("verify: unknown suite '" + s + "'");
    if (samples == 0) throw ParseError("verify: samples must be positive");
  }
};

namespace detail {

// Tracker for suites whose sub-checks carry heterogeneous tolerances: every
// sub-residual is divided by its own tolerance and the suite reports the
// worst ratio against the fixed threshold 1. Boolean sub-checks report ratio
// 2 on failure so they can never be washed out.
class RatioTracker {
 public:
  explicit RatioTracker(SuiteReport& rep) : rep_(rep) {
    rep_.tolerance_used = 1.0;
  }

  void residual(double value, double tolerance, const CoeffVector* cex = nullptr,
                const char* what = nullptr) {
    record(tolerance > 0.0 ? value / tolerance : (value > 0.0 ? 2.0 : 0.0), cex,
           what);
  }

  void require(bool ok, const CoeffVector* cex = nullptr,
               const char* what = nullptr) {
    record(ok ? 0.0 : 2.0, cex, what);
  }

  void finish() {
    rep_.pass = rep_.max_residual <= rep_.tolerance_used;
    if (rep_.pass) {
      rep_.counterexample.reset();
    } else if (!worst_.empty()) {
      rep_.detail += " | worst: " + worst_;
    }
  }

 private:
  void record(double ratio, const CoeffVector* cex, const char* what) {
    if (ratio > rep_.max_residual) {
      rep_.max_residual = ratio;
      if (cex)
        rep_.counterexample = *cex;
      else
        rep_.counterexample.reset();
      worst_ = what ? what : "";
    }
  }

  SuiteReport& rep_;
  std::string worst_;
};

inline CoeffVector nonempty_random_vector(Rng& rng, const IndexSet& set) {
  for (int guard = 0; guard < 16; ++guard) {
    CoeffVector v = random_vector(rng, set);
    if (!v.empty()) return v;
  }
  return CoeffVector::basis(set, 1);
}

// ── individual suites ───────────────────────────────────────────────────────

inline void suite_pairing(const QuasiTriple& t, std::size_t samples,
                          SuiteReport& rep) {
  Rng rng(rep.seed);
  const IndexSet set = t.gram.index_set();
  double kappa = 1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const CoeffVector g = random_vector(rng, set);
    const CoeffVector f = random_vector(rng, set);
    const cplx pair = pairing(t, g, f);
    const double r = std::max(
        std::abs(pair - pivot_inner(g, f)),
        std::abs(pair - plus_inner(
                            t, duality_map_psi(t, g, PsiDirection::forward), f)));
    kappa = std::max(kappa, t.gram.condition_for({&g, &f}));
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.counterexample = g;
    }
  }
  rep.tolerance_used = t.tolerance.scaled_algebraic(kappa);
  rep.pass = rep.max_residual <= rep.tolerance_used;
  if (rep.pass) rep.counterexample.reset();
  rep.detail =
      "pairing extends the pivot inner product and transports through Psi";
}

inline void suite_minus_norm_oracle(const QuasiTriple& t, std::size_t samples,
                                    SuiteReport& rep) {
  Rng rng(rep.seed);
  const IndexSet set = t.gram.index_set();
  const std::size_t n_vectors = std::max<std::size_t>(1, samples / 50);
  const std::int64_t trials = 1000;
  for (std::size_t v = 0; v < n_vectors; ++v) {
    const CoeffVector g = nonempty_random_vector(rng, set);
    const double closed = minus_norm(t, g);
    const double oracle = minus_norm_oracle(t, g, trials, rng.next_u64());
    const double r = std::abs(closed - oracle) / std::max(1.0, closed);
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.counterexample = g;
    }
  }
  rep.tolerance_used = t.tolerance.oracle_tol;
  rep.pass = rep.max_residual <= rep.tolerance_used;
  if (rep.pass) rep.counterexample.reset();
  rep.detail = "brute-force dual-norm search agrees with the closed form";
}

inline void suite_gram_roundtrip(const QuasiTriple& t, std::size_t samples,
                                 SuiteReport& rep) {
  (void)samples;
  const auto form = induced_plus_form(t);
  double kappa = 1.0;

  if (t.gram.kind() == GramOperator::Kind::analytic_diagonal) {
    // Infinite carrier: probe the induced form on the window |i| <= 6, where
    // it must reproduce the diagonal weights.
    double wmin = kInf, wmax = 0.0;
    for (std::int64_t i = -6; i <= 6; ++i) {
      if (i == 0) continue;
      wmin = std::min(wmin, t.gram.weight_at(i));
      wmax = std::max(wmax, t.gram.weight_at(i));
      for (std::int64_t j = -6; j <= 6; ++j) {
        if (j == 0) continue;
        const cplx expected =
            i == j ? cplx(t.gram.weight_at(i), 0.0) : cplx(0.0, 0.0);
        rep.max_residual =
            std::max(rep.max_residual, std::abs(form(i, j) - expected));
      }
    }
    kappa = wmax / wmin;
    rep.detail = "induced plus-form matches the diagonal weights on |i| <= 6";
  } else {
    const std::int64_t dim = t.gram.dim();
    const GramOperator recovered = recover_gram(form, dim);
    double scale = 1.0;
    double worst = 0.0;
    for (std::int64_t i = 1; i <= dim; ++i)
      for (std::int64_t j = 1; j <= dim; ++j) {
        const cplx expected =
            t.gram.kind() == GramOperator::Kind::dense_spd
                ? t.gram.matrix()(i - 1, j - 1)
                : (i == j ? cplx(t.gram.weight_at(i), 0.0) : cplx(0.0, 0.0));
        scale = std::max(scale, std::abs(expected));
        worst = std::max(worst,
                         std::abs(recovered.matrix()(i - 1, j - 1) - expected));
      }
    rep.max_residual = worst / scale;
    kappa = t.gram.condition_number();
    rep.detail = "recover_gram inverts the induced plus-form entrywise";
  }

  rep.tolerance_used = t.tolerance.scaled_algebraic(kappa);
  rep.pass = rep.max_residual <= rep.tolerance_used;
}

inline void suite_pivot_split(const QuasiTriple& t, std::size_t samples,
                              SuiteReport& rep) {
  Rng rng(rep.seed);
  const IndexSet set = t.gram.index_set();
  double kappa = 1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const CoeffVector x = random_vector(rng, set);
    const PivotSplit sp = pivot_split(t, x);
    double r = 0.0;
    if (!(vec_axpy(cplx(1.0, 0.0), sp.f, sp.g) == x)) r = 1.0;  // must be exact

    // Calculus coherence, cross-checked through two independent routes:
    // the g-side weight lambda/(1+lambda) against G applied to the f-side
    // weight 1/(1+lambda).
    const CoeffVector g0 =
        t.gram.apply_calculus(x, [](double lam) { return lam / (1.0 + lam); });
    const CoeffVector f0 =
        t.gram.apply_calculus(x, [](double lam) { return 1.0 / (1.0 + lam); });
    const CoeffVector gf0 = gram_apply(t.gram, f0, 1.0);
    r = std::max(r, pivot_norm(vec_axpy(cplx(-1.0, 0.0), gf0, g0)) /
                        std::max(1.0, pivot_norm(x)));

    // The returned g tracks the calculus value componentwise wherever the
    // part does not exceed the component: there the exact pair is provably
    // within rounding of the calculus. Where the calculus part overshoots
    // the component, exact pairs near it may not exist at all (the split
    // then clamps), so only exactness of the reassembly is required.
    const double scale = std::max(1.0, pivot_norm(x));
    for (const auto& [i, gi] : sp.g.entries()) {
      const cplx ci = x.at(i);
      const cplx ri = g0.at(i);
      if (std::abs(ri.real()) <= std::abs(ci.real()))
        r = std::max(r, std::abs(gi.real() - ri.real()) / scale);
      if (std::abs(ri.imag()) <= std::abs(ci.imag()))
        r = std::max(r, std::abs(gi.imag() - ri.imag()) / scale);
    }

    kappa = std::max(kappa, t.gram.condition_for({&x}));
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.counterexample = x;
    }
  }
  rep.tolerance_used = t.tolerance.scaled_algebraic(kappa);
  rep.pass = rep.max_residual <= rep.tolerance_used;
  if (rep.pass) rep.counterexample.reset();
  rep.detail = "x = f + g bit-exactly, with g = G f up to rounding";
}

inline void suite_zspace(const QuasiTriple& t, std::size_t samples,
                         SuiteReport& rep) {
  Rng rng(rep.seed);
  const IndexSet set = t.gram.index_set();
  const TolerancePolicy& tol = t.tolerance;
  RatioTracker track(rep);
  rep.detail = "Z-space splits, norms, optimality and intersection witnesses";

  for (std::size_t s = 0; s < samples; ++s) {
    const CoeffVector h = nonempty_random_vector(rng, set);
    const double tol_h = tol.scaled_algebraic(t.gram.condition_for({&h}));

    // Canonical split: reassembly within rounding (bit-exact for diagonal
    // operators; dense calculus parts may overshoot a component, where the
    // nearest representable pair carries a half-ulp error) and Pythagoras.
    const ZMinusElement can = canonical_split(t, h);
    track.residual(pivot_norm(vec_axpy(cplx(-1.0, 0.0), can.sum(), h)) /
                       std::max(1.0, pivot_norm(h)),
                   tol_h, &h, "canonical split reassembly");
    const double zm = z_minus_norm(t, ZMinusElement::from_pivot(h));
    const double pp = plus_norm(t, can.plus_part);
    const double mm = minus_norm(t, can.minus_part);
    track.residual(
        std::abs(zm * zm - (pp * pp + mm * mm)) / std::max(1.0, zm * zm), tol_h,
        &h, "canonical split Pythagoras");

    // Sum-of-squares norm on the intersection space.
    const double zp = z_plus_norm(t, h);
    const double hp = plus_norm(t, h);
    const double hm = minus_norm(t, h);
    track.residual(
        std::abs(zp * zp - (hp * hp + hm * hm)) / std::max(1.0, zp * zp), tol_h,
        &h, "z_plus sum-of-squares identity");

    // Optimal split: matches the closed form, never beaten by probes,
    // invariant under re-splitting of the same sum.
    const CoeffVector f = random_vector(rng, set);
    const CoeffVector g = nonempty_random_vector(rng, set);
    const ZMinusElement el{f, g};
    const OptimalSplit opt = optimal_split(t, f, g);
    const double closed = z_minus_norm(t, el);
    track.residual(std::abs(opt.value - closed) / std::max(1.0, closed),
                   tol.oracle_tol, &g, "optimal split vs closed form");
    for (int probe = 0; probe < 3; ++probe) {
      const CoeffVector z = random_vector(rng, set);
      const double tol_z =
          tol.scaled_algebraic(t.gram.condition_for({&f, &g, &z}));
      const double val =
          std::hypot(plus_norm(t, vec_axpy(cplx(1.0, 0.0), z, f)),
                     minus_norm(t, vec_axpy(cplx(-1.0, 0.0), z, g)));
      track.residual(std::max(0.0, opt.value - val) / std::max(1.0, opt.value),
                     tol_z, &z, "optimal split minimality");
    }
    track.require(z_minus_equal(t, el, canonical_split(t, el.sum())), &g,
                  "Z_- identification of equal sums");

    // Intersection witness classification.
    track.require(intersection_witness(t, h, h).equal, &h,
                  "intersection witness on equal vectors");
    CoeffVector perturbed = h;
    const std::int64_t idx = random_index(rng, set);
    perturbed.set(idx, perturbed.at(idx) + cplx(1e-3, 0.0));
    track.require(!intersection_witness(t, h, perturbed).equal, &perturbed,
                  "intersection witness on distinct vectors");
  }
  track.finish();
}

inline void suite_decomposition(const QuasiTriple& t, std::size_t samples,
                                SuiteReport& rep) {
  const std::size_t n = std::min<std::size_t>(samples, 400);
  const SpectralSplit s1 = decompose(t);
  const SpectralSplit s2 = decompose(t, IntervalSet(Interval(0.0, 2.0)));
  const DecompositionReport r1 = verify_decomposition(s1, t, n, rep.seed);
  const DecompositionReport r2 =
      verify_decomposition(s2, t, n, subseed(rep.seed, "cut-0-2"));
  rep.max_residual = std::max(r1.max_residual(), r2.max_residual());
  rep.tolerance_used = std::max(r1.tolerance_used, r2.tolerance_used);
  bool ok = r1.pass && r2.pass;

  // Reassembly roundtrip through the two components of the default cut.
  Rng rng(subseed(rep.seed, "recompose"));
  const IndexSet set = t.gram.index_set();
  for (std::size_t k = 0; k < std::min<std::size_t>(n, 100); ++k) {
    const CoeffVector x = random_vector(rng, set);
    const CoeffVector back = recompose(s1, s1.proj_unbounded.apply(x),
                                       s1.proj_bounded.apply(x));
    const double r = pivot_norm(vec_axpy(cplx(-1.0, 0.0), x, back)) /
                     std::max(1.0, pivot_norm(x));
    const double tol_x = t.tolerance.scaled_algebraic(t.gram.condition_for({&x}));
    if (r > tol_x) {
      ok = false;
      rep.max_residual = std::max(rep.max_residual, r);
      rep.counterexample = x;
    }
  }

  // Mixing components must be rejected: feed a vector with a bounded-side
  // part into the component-1 slot.
  std::vector<std::int64_t> candidates;
  if (set.kind() == IndexSet::Kind::finite) {
    for (std::int64_t i = 1; i <= t.gram.dim(); ++i) candidates.push_back(i);
  } else {
    for (std::int64_t i = 1; i <= 8; ++i) {
      candidates.push_back(i);
      candidates.push_back(-i);
    }
  }
  for (const std::int64_t i : candidates) {
    const CoeffVector e = CoeffVector::basis(set, i);
    const CoeffVector leak = s1.proj_bounded.apply(e);
    if (pivot_norm(leak) < 1e-6) continue;  // essentially component-1 only
    bool threw = false;
    try {
      recompose(s1, e, CoeffVector(set));
    } catch (const ComponentLeak&) {
      threw = true;
    }
    if (!threw) {
      ok = false;
      rep.counterexample = e;
      rep.detail = "recompose accepted a leaking component-1 argument";
    }
    break;
  }

  rep.pass = ok;
  if (rep.pass) rep.counterexample.reset();
  if (rep.detail.empty())
    rep.detail =
        "projection algebra, contractivity, orthogonality, spectral norm "
        "bounds, cross-duality, reassembly (cuts (0,1] and (0,2])";
}

inline void suite_relations(const QuasiTriple& t, std::size_t samples,
                            SuiteReport& rep) {
  Rng rng(rep.seed);
  const TolerancePolicy& tol = t.tolerance;
  RatioTracker track(rep);
  rep.detail =
      "relation parts, adjoint involution, annihilator identities, "
      "change-of-pairing, positivity of I+T*T";

  // Fixed examples first.
  {
    Eigen::MatrixXcd a0(2, 2);
    a0 << 1.0, 2.0, 0.0, 1.0;
    const LinearRelation adj = adjoint_relation(
        LinearRelation::graph(a0), DualPairing::canonical(2),
        DualPairing::canonical(2));
    track.residual(
        lin::subspace_distance(adj.basis,
                               LinearRelation::graph(a0.adjoint()).basis),
        tol.algebraic_tol, nullptr, "adjoint of a fixed 2x2 graph");

    Eigen::MatrixXcd psi1(2, 2);
    psi1 << 2.0, 0.0, 0.0, 0.5;
    const ChangeOfPairingReport cp = change_of_pairing_check(
        a0, psi1, Eigen::MatrixXcd::Identity(2, 2), tol);
    track.residual(cp.residual, cp.tolerance_used, nullptr,
                   "fixed change-of-pairing example");
    track.residual((cp.adjoint_by_formula - psi1 * a0.adjoint())
                       .cwiseAbs()
                       .maxCoeff(),
                   tol.algebraic_tol, nullptr,
                   "change-of-pairing closed form");

    // Purely multivalued relation {0} x C.
    Eigen::MatrixXcd col(2, 1);
    col << 0.0, 1.0;
    const LinearRelation r0 = LinearRelation::from_columns(1, 1, col);
    const RelationParts p0 = relation_parts(r0);
    track.require(p0.mul.cols() == 1 && p0.dom.cols() == 0, nullptr,
                  "multivalued-part extraction");
    const LinearRelation r0adj = adjoint_relation(
        r0, DualPairing::canonical(1), DualPairing::canonical(1));
    const RelationParts p0a = relation_parts(r0adj);
    track.require(p0a.mul.cols() == 1 && p0a.dom.cols() == 0, nullptr,
                  "mul of the adjoint is the annihilator of the domain");
  }

  const std::size_t iters = std::max<std::size_t>(4, samples / 100);
  for (std::size_t it = 0; it < iters; ++it) {
    const Eigen::Index n1 = 2 + static_cast<Eigen::Index>(it % 4);
    const Eigen::Index n2 = 2 + static_cast<Eigen::Index>((it + 1) % 3);
    const Eigen::MatrixXcd a = lin::random_matrix(rng, n2, n1);
    const LinearRelation r = LinearRelation::graph(a);
    const DualPairing c1 = DualPairing::canonical(n1);
    const DualPairing c2 = DualPairing::canonical(n2);

    const RelationParts p = relation_parts(r);
    track.residual(
        lin::subspace_distance(p.dom, Eigen::MatrixXcd::Identity(n1, n1)),
        tol.algebraic_tol, nullptr, "graph domain is everything");
    track.residual(lin::subspace_distance(p.ker, lin::null_space(a)),
                   tol.algebraic_tol, nullptr, "graph kernel");
    track.residual(lin::subspace_distance(p.ran, lin::orthonormalize(a)),
                   tol.algebraic_tol, nullptr, "graph range");
    track.require(p.mul.cols() == 0, nullptr, "graphs are single-valued");

    const LinearRelation adj = adjoint_relation(r, c1, c2);
    track.residual(
        lin::subspace_distance(adj.basis,
                               LinearRelation::graph(a.adjoint()).basis),
        tol.algebraic_tol, nullptr, "adjoint graph is the conjugate transpose");
    const LinearRelation adj2 = adjoint_relation(adj, c2, c1);
    track.residual(lin::subspace_distance(adj2.basis, r.basis),
                   tol.algebraic_tol, nullptr, "double adjoint involution");

    const RelationParts pa = relation_parts(adj);
    track.residual(lin::subspace_distance(pa.ker, c2.annihilator(p.ran)),
                   tol.algebraic_tol, nullptr,
                   "kernel of adjoint = annihilator of range");
    track.residual(lin::subspace_distance(pa.mul, c1.annihilator(p.dom)),
                   tol.algebraic_tol, nullptr,
                   "mul of adjoint = annihilator of domain");

    const ChangeOfPairingReport cp = change_of_pairing_check(
        a, lin::random_matrix(rng, n1, n1), lin::random_matrix(rng, n2, n2),
        tol);
    track.residual(cp.residual, cp.tolerance_used, nullptr,
                   "randomized change-of-pairing");

    const VonNeumannReport vn = von_neumann_check(
        lin::random_matrix(rng, n1 + 2, n2), tol, rng.next_u64());
    track.require(vn.pass, nullptr, "I+T*T positivity and solvability");
    track.residual(std::max(0.0, 1.0 - vn.min_eig_left), tol.algebraic_tol,
                   nullptr, "min eigenvalue of I+T*T");
  }
  track.finish();
}

inline void suite_cesaro(const QuasiTriple& t, std::size_t samples,
                         SuiteReport& rep) {
  Rng rng(rep.seed);
  const TolerancePolicy& tol = t.tolerance;
  RatioTracker track(rep);
  rep.detail = "greedy near-orthogonal selection drives Cesaro means to zero";

  // Orthonormal sequence: everything is selected and the mean has norm
  // exactly 1/sqrt(N).
  {
    const IndexSet set = IndexSet::finite(100);
    std::vector<CoeffVector> vecs;
    for (std::int64_t i = 1; i <= 100; ++i)
      vecs.push_back(CoeffVector::basis(set, i));
    const CesaroResult r = cesaro_select(vecs, 100);
    track.require(r.indices.size() == 100, nullptr,
                  "orthonormal sequence fully selected");
    track.residual(std::abs(r.cesaro_norm - 0.1), tol.algebraic_tol, nullptr,
                   "orthonormal Cesaro norm = 1/10");
    track.require(r.cesaro_norm <= r.bound, nullptr,
                  "selection bound on orthonormal input");
  }
  {
    const IndexSet set = IndexSet::finite(16);
    std::vector<CoeffVector> vecs;
    for (std::int64_t i = 1; i <= 16; ++i)
      vecs.push_back(CoeffVector::basis(set, i));
    const CesaroResult r = cesaro_select(vecs, 16);
    track.residual(std::abs(r.cesaro_norm - 0.25), tol.algebraic_tol, nullptr,
                   "16-vector Cesaro norm = 1/4");
    track.require(r.cesaro_norm <=
                      std::sqrt(1.0 / 16.0 + std::log(16.0) / 16.0),
                  nullptr, "explicit bound at N = 16");
  }

  // A constant sequence is not weakly null: the second pick must fail.
  {
    const IndexSet set = IndexSet::finite(2);
    const std::vector<CoeffVector> vecs(5, CoeffVector::basis(set, 1));
    bool exhausted = false;
    std::size_t partial = 0;
    try {
      cesaro_select(vecs, 2);
    } catch (const SelectionExhausted& e) {
      exhausted = true;
      partial = e.partial_indices.size();
    }
    track.require(exhausted && partial == 1, nullptr,
                  "constant sequence exhausts after one pick");
  }

  // Random unit vectors: whenever the selection succeeds the bound holds.
  {
    const IndexSet set = IndexSet::finite(64);
    const std::size_t n_vecs = std::min<std::size_t>(150, 50 + samples / 10);
    std::vector<CoeffVector> vecs;
    for (std::size_t k = 0; k < n_vecs; ++k) {
      CoeffVector v(set);
      double norm2 = 0.0;
      for (std::int64_t i = 1; i <= 64; ++i) {
        const cplx c = rng.next_complex_gaussian();
        v.set(i, c);
        norm2 += std::norm(c);
      }
      const double inv = 1.0 / std::sqrt(norm2);
      CoeffVector u(set);
      for (const auto& [i, c] : v.entries()) u.set(i, c * inv);
      vecs.push_back(std::move(u));
    }
    try {
      const CesaroResult r = cesaro_select(vecs, 8);
      track.residual(std::max(0.0, r.cesaro_norm - r.bound), tol.algebraic_tol,
                     nullptr, "selection bound on random unit vectors");
    } catch (const SelectionExhausted&) {
      // Admissible: random sequences need not contain a full selection.
    }
  }
  track.finish();
}

inline void suite_catalog_demos(const QuasiTriple& t, std::size_t samples,
                                SuiteReport& rep) {
  Rng rng(rep.seed);
  const TolerancePolicy& tol = t.tolerance;
  RatioTracker track(rep);
  rep.detail =
      "Cauchy-increment demo, diagonal reciprocity, Holder duality, seeded "
      "SPD generator";

  // Increments of partial sums over negative indices: small in plus norm,
  // divergent in pivot norm.
  {
    const CauchyDemo d1 = cauchy_demo(1, 3);
    track.residual(std::abs(d1.plus_increment - 7.0 / 6.0), tol.algebraic_tol,
                   nullptr, "cauchy_demo(1,3) plus value");
    track.residual(std::abs(d1.pivot_increment - std::sqrt(3.0)),
                   tol.algebraic_tol, nullptr, "cauchy_demo(1,3) pivot value");
    const CauchyDemo d2 = cauchy_demo(10, 1000000);
    track.require(d2.plus_increment <= 1.0 / 3.0, nullptr,
                  "tail plus increment below 1/3");
    track.require(d2.pivot_increment >= 999.0, nullptr,
                  "tail pivot increment above 999");
    const CauchyDemo d3 = cauchy_demo(5, 5);
    track.residual(std::abs(d3.plus_increment - 0.2), tol.algebraic_tol,
                   nullptr, "single-term plus value");
    track.residual(std::abs(d3.pivot_increment - 1.0), tol.algebraic_tol,
                   nullptr, "single-term pivot value");
    for (const std::int64_t m : {2, 10, 100}) {
      const CauchyDemo dm = cauchy_demo(m, 100000000);
      track.require(
          dm.plus_increment <= std::sqrt(1.0 / static_cast<double>(m - 1)),
          nullptr, "integral tail bound");
    }
    bool threw = false;
    try {
      cauchy_demo(3, 2);
    } catch (const InvalidRange&) {
      threw = true;
    }
    track.require(threw, nullptr, "m > n rejected");
  }

  // Diagonal reciprocity on the doubly infinite instance.
  {
    const TripleInstance inst = paper_ell2_triple();
    const IndexSet set = inst.triple.gram.index_set();
    for (std::int64_t n = 1; n <= 20; ++n) {
      for (const std::int64_t i : {n, -n}) {
        const CoeffVector e = CoeffVector::basis(set, i);
        track.residual(
            std::abs(plus_norm(inst.triple, e) * minus_norm(inst.triple, e) -
                     1.0),
            tol.algebraic_tol, &e, "plus/minus reciprocity on basis vectors");
      }
    }
  }

  // Discrete Lp duality.
  {
    bool threw = false;
    try {
      lp_discrete_triple(1.0, 4);
    } catch (const InvalidExponent&) {
      threw = true;
    }
    track.require(threw, nullptr, "exponent p = 1 rejected");

    for (const double p : {4.0 / 3.0, 2.0, 3.0}) {
      for (const std::size_t n : {std::size_t{8}, std::size_t{64}}) {
        const LpDiscreteTriple lp = lp_discrete_triple(p, n);
        const auto random_grid = [&]() {
          std::vector<cplx> vals(n);
          for (auto& v : vals) v = rng.next_complex_gaussian();
          return lp.grid(std::move(vals));
        };
        const std::size_t pairs = std::max<std::size_t>(1, samples / 6);
        for (std::size_t k = 0; k < pairs; ++k) {
          const GridFunction f = random_grid();
          const GridFunction g = random_grid();
          const HolderReport hr = lp.holder_check(f, g, tol);
          track.require(hr.pass, nullptr, "Holder inequality on random pairs");
        }
        // Aligned equality case: |g| = |f|^{p-1} with matching phases.
        const GridFunction f = random_grid();
        std::vector<cplx> gv(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double mag = std::abs(f.values[i]);
          gv[i] = mag > 0.0
                      ? std::pow(mag, p - 1.0) * (f.values[i] / mag)
                      : cplx(0.0, 0.0);
        }
        const HolderReport hr = lp.holder_check(f, lp.grid(std::move(gv)), tol);
        track.residual(std::abs(hr.ratio - 1.0), tol.algebraic_tol, nullptr,
                       "Holder equality case attains ratio 1");
        if (p == 2.0) {
          track.residual(std::abs(lp.plus_norm(f) - lp.pivot_norm(f)),
                         tol.algebraic_tol, nullptr,
                         "self-dual exponent collapses the norms");
        }
      }
    }
  }

  // Seeded dense SPD generator: deterministic, condition number pinned.
  {
    const TripleInstance a = random_spd_triple(4, 100.0, 1);
    const TripleInstance b = random_spd_triple(4, 100.0, 1);
    track.residual(
        (a.triple.gram.matrix() - b.triple.gram.matrix()).cwiseAbs().maxCoeff(),
        tol.algebraic_tol, nullptr, "generator determinism");
    track.residual(std::abs(a.triple.gram.condition_number() - 100.0),
                   tol.oracle_tol, nullptr, "condition number pinned");
    const TripleInstance c = random_spd_triple(1, 1.0, 7);
    track.residual(std::abs(c.triple.gram.matrix()(0, 0) - cplx(1.0, 0.0)),
                   tol.algebraic_tol, nullptr, "scalar case is the identity");
  }
  (void)t;
  track.finish();
}

}  // namespace detail

// Runs the requested suites (all nine when the list is empty) against the
// triple. Each suite draws from its own sub-seed derived from the master seed
// and the suite name, so suite selection and ordering never change results.
inline std::vector<SuiteReport> run_verify(const QuasiTriple& t,
                                           const VerifyOptions& opt) {
  opt.validate();
  const std::vector<std::string>& list =
      opt.suites.empty() ? known_suites() : opt.suites;

  std::vector<SuiteReport> out;
  out.reserve(list.size());
  for (const std::string& name : list) {
    SuiteReport rep;
    rep.name = name;
    rep.seed = subseed(opt.seed, name);
    const auto start = std::chrono::steady_clock::now();
    try {
      if (name == "pairing")
        detail::suite_pairing(t, opt.samples, rep);
      else if (name == "minus-norm-oracle")
        detail::suite_minus_norm_oracle(t, opt.samples, rep);
      else if (name == "gram-roundtrip")
        detail::suite_gram_roundtrip(t, opt.samples, rep);
      else if (name == "pivot-split")
        detail::suite_pivot_split(t, opt.samples, rep);
      else if (name == "zspace")
        detail::suite_zspace(t, opt.samples, rep);
      else if (name == "decomposition")
        detail::suite_decomposition(t, opt.samples, rep);
      else if (name == "relations")
        detail::suite_relations(t, opt.samples, rep);
      else if (name == "cesaro")
        detail::suite_cesaro(t, opt.samples, rep);
      else if (name == "catalog-demos")
        detail::suite_catalog_demos(t, opt.samples, rep);
    } catch (const std::exception& e) {
      rep.pass = false;
      rep.detail = std::string("exception: ") + e.what();
      if (rep.max_residual <= rep.tolerance_used)
        rep.max_residual = rep.tolerance_used + 1.0;
    }
    const auto end = std::chrono::steady_clock::now();
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
    out.push_back(std::move(rep));
  }
  return out;
}

inline bool all_pass(const std::vector<SuiteReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const SuiteReport& r) { return r.pass; });
}

}  // namespace qgt
