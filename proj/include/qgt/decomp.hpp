#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/interval.hpp"
#include "qgt/rng.hpp"
#include "qgt/sampling.hpp"
#include "qgt/triple.hpp"
#include "qgt/weights.hpp"

namespace qgt {

// Which norm dominates on a spectral component. At the default cut (0,1] the
// unbounded side is plus-dominant (||f||_+ >= ||f||_0) and the bounded side
// pivot-dominant; a general cut can mix both regimes on one side.
enum class NormDominance { plus_norm, pivot_norm, mixed, trivial };

struct ComponentDim {
  bool infinite = false;
  std::int64_t count = 0;

  std::string describe() const {
    return infinite ? "infinite" : std::to_string(count);
  }
};

// One ordinary (continuously embedded) Gelfand triple carved out of the quasi
// triple by a spectral projection of G^{1/2}.
struct OrdinaryTriple {
  // Restriction of G to the spectral subspace: the surviving diagonal weights
  // (finite kinds, in eigenbasis coordinates for dense operators). Analytic
  // components keep the full weight formula — inputs are expected to be
  // supported in the component, where the two agree. Empty components carry
  // no operator.
  std::optional<GramOperator> gram_restricted;

  // Operator norm of the continuous embedding: sup ||f||_0 / ||f||_+ on the
  // plus-dominant side, sup ||f||_+ / ||f||_0 on the pivot-dominant side;
  // both are <= 1 at the default cut.
  double embedding_constant = 0.0;

  NormDominance direction = NormDominance::trivial;
  ComponentDim dim;
  std::string description;

  // Extremes of sqrt(lambda) over the component's spectrum; 0/inf conventions
  // for empty or accumulating spectra. These drive the norm inequalities.
  double sqw_inf = kInf;
  double sqw_sup = 0.0;
};

struct SpectralSplit {
  IntervalSet cut;                   // Delta, bounded
  SpectralProjector proj_bounded;    // E(Delta): the sqrt-spectrum in the cut
  SpectralProjector proj_unbounded;  // E(Delta complement)
  OrdinaryTriple component1;         // sqrt-spectrum outside the cut
  OrdinaryTriple component2;         // sqrt-spectrum inside the cut
};

namespace detail {

inline NormDominance dominance_from_extremes(bool any, double lo, double hi) {
  if (!any) return NormDominance::trivial;
  if (lo >= 1.0) return NormDominance::plus_norm;
  if (hi <= 1.0) return NormDominance::pivot_norm;
  return NormDominance::mixed;
}

inline double embedding_from_extremes(NormDominance d, double lo, double hi) {
  switch (d) {
    case NormDominance::trivial:
      return 0.0;
    case NormDominance::plus_norm:
      return 1.0 / lo;  // sup ||f||_0/||f||_+ = 1/min sqrt(lambda)
    case NormDominance::pivot_norm:
      return hi;  // sup ||f||_+/||f||_0 = max sqrt(lambda)
    case NormDominance::mixed:
      // No one-sided embedding; report the spread.
      return hi / lo;
  }
  return 0.0;
}

// Component description for enumerable spectra.
inline std::string enumerated_description(const std::vector<std::int64_t>& idx,
                                          const char* what) {
  std::ostringstream os;
  os << idx.size() << " " << what;
  if (!idx.empty() && idx.size() <= 16) {
    os << " {";
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
    os << "}";
  }
  return os.str();
}

inline OrdinaryTriple finite_component(const GramOperator& g,
                                       const IntervalSet& s, bool dense) {
  OrdinaryTriple c;
  std::vector<std::int64_t> kept;
  std::vector<double> lambdas;
  if (dense) {
    const auto& eig = g.eigen();
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
      const double lam = eig.eigenvalues(k);
      const double sq = lam > 0.0 ? std::sqrt(lam) : 0.0;
      if (s.contains(sq)) {
        kept.push_back(k + 1);
        lambdas.push_back(lam);
      }
    }
    c.description = enumerated_description(kept, "eigenvectors");
  } else {
    for (std::int64_t i = 1; i <= g.dim(); ++i) {
      if (s.contains(g.sqrt_weight_at(i))) {
        kept.push_back(i);
        lambdas.push_back(g.weight_at(i));
      }
    }
    c.description = enumerated_description(kept, "coordinates");
  }
  c.dim = ComponentDim{false, static_cast<std::int64_t>(kept.size())};
  for (const double lam : lambdas) {
    c.sqw_inf = std::min(c.sqw_inf, std::sqrt(lam));
    c.sqw_sup = std::max(c.sqw_sup, std::sqrt(lam));
  }
  c.direction = dominance_from_extremes(!kept.empty(), c.sqw_inf, c.sqw_sup);
  c.embedding_constant = embedding_from_extremes(c.direction, c.sqw_inf, c.sqw_sup);
  if (!lambdas.empty()) c.gram_restricted = GramOperator::finite_diagonal(lambdas);
  return c;
}

inline OrdinaryTriple analytic_component(const GramOperator& g,
                                         const IntervalSet& s) {
  OrdinaryTriple c;
  const WeightMatch m = WeightMatch::analyze(g.weight_spec(), s);
  c.dim = ComponentDim{m.infinite, m.count};
  c.description = m.description;
  c.sqw_inf = m.sqw_inf;
  c.sqw_sup = m.sqw_sup;
  c.direction = dominance_from_extremes(m.any(), m.sqw_inf, m.sqw_sup);
  c.embedding_constant = embedding_from_extremes(c.direction, c.sqw_inf, c.sqw_sup);
  if (m.any()) c.gram_restricted = g;  // weight formula restricted by context
  return c;
}

}  // namespace detail

// Splits the triple along the spectral cut on the sqrt(lambda) scale (the
// spectrum of G^{1/2} — not of G; the two conventions differ exactly where it
// hurts). Boundary points of the half-open cells land on the bounded side,
// mirroring the projection onto (0,1]. The cut must be a nonempty bounded
// interval union inside (0, inf).
inline SpectralSplit decompose(const QuasiTriple& t,
                               IntervalSet cut = IntervalSet::unit()) {
  if (cut.empty()) throw InvalidInterval("decompose: empty cut");
  if (!cut.bounded()) throw InvalidInterval("decompose: cut must be bounded");
  const IntervalSet co = cut.complement();
  const GramOperator& g = t.gram;

  OrdinaryTriple c1, c2;
  switch (g.kind()) {
    case GramOperator::Kind::analytic_diagonal:
      c1 = detail::analytic_component(g, co);
      c2 = detail::analytic_component(g, cut);
      break;
    case GramOperator::Kind::finite_diagonal:
      c1 = detail::finite_component(g, co, /*dense=*/false);
      c2 = detail::finite_component(g, cut, /*dense=*/false);
      break;
    case GramOperator::Kind::dense_spd:
      c1 = detail::finite_component(g, co, /*dense=*/true);
      c2 = detail::finite_component(g, cut, /*dense=*/true);
      break;
  }

  return SpectralSplit{cut, spectral_projection(g, cut),
                       spectral_projection(g, co), std::move(c1), std::move(c2)};
}

// ── verification of the decomposition claims ────────────────────────────────

struct DecompositionReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // All residuals are relative to the magnitudes of the vectors involved.
  double projection_algebra = 0.0;   // idempotent/Hermitian/complementary/annihilating
  double contractivity = 0.0;        // projections contract ||.||_+ and ||.||_-
  double orthogonality = 0.0;        // parts orthogonal in all three inner products
  double norm_inequalities = 0.0;    // spectral-bound inequalities per component
  double cross_duality = 0.0;        // <E(Delta) f, E(Delta^c) g> pairings vanish
  double tolerance_used = 0.0;
  bool pass = false;

  double max_residual() const {
    return std::max({projection_algebra, contractivity, orthogonality,
                     norm_inequalities, cross_duality});
  }
};

// Checks, on seeded random finite-support vectors:
//   (a) the two projections are idempotent, Hermitian, complementary and
//       mutually annihilating;
//   (b) both are contractive in ||.||_+ and ||.||_-;
//   (c) the two parts of one vector are orthogonal in <.,.>_0, <.,.>_+ and
//       <.,.>_-;
//   (d) on each component the norms obey the spectral bounds
//       ||E(D^c)f||_+ >= inf{sqrt(lam) outside} ||E(D^c)f||_0 and
//       ||E(D)f||_+ <= sup{sqrt(lam) inside} ||E(D)f||_0, plus the mirrored
//       minus-norm bounds (constant 1 both ways at the default cut);
//   (e) cross-duality pairings between opposite components vanish.
inline DecompositionReport verify_decomposition(const SpectralSplit& s,
                                                const QuasiTriple& t,
                                                std::size_t samples,
                                                std::uint64_t seed) {
  DecompositionReport rep;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  const IndexSet set = t.gram.index_set();
  double kappa = 1.0;

  const auto rel = [](double num, double scale) {
    return num / std::max(1.0, scale);
  };

  for (std::size_t k = 0; k < samples; ++k) {
    const CoeffVector f = random_vector(rng, set);
    const CoeffVector g = random_vector(rng, set);
    kappa = std::max(kappa, t.gram.condition_for({&f, &g}));
    const double fscale = pivot_norm(f);
    const double gscale = pivot_norm(g);

    const CoeffVector f2 = s.proj_bounded.apply(f);
    const CoeffVector f1 = s.proj_unbounded.apply(f);
    const CoeffVector g2 = s.proj_bounded.apply(g);
    const CoeffVector g1 = s.proj_unbounded.apply(g);

    // (a) algebra
    const CoeffVector f2f2 = s.proj_bounded.apply(f2);
    const CoeffVector f1f1 = s.proj_unbounded.apply(f1);
    const CoeffVector annihilated = s.proj_bounded.apply(f1);
    CoeffVector sum = vec_axpy(cplx(1.0, 0.0), f1, f2);
    rep.projection_algebra = std::max(
        {rep.projection_algebra,
         rel(pivot_norm(vec_axpy(cplx(-1.0, 0.0), f2, f2f2)), fscale),
         rel(pivot_norm(vec_axpy(cplx(-1.0, 0.0), f1, f1f1)), fscale),
         rel(pivot_norm(annihilated), fscale),
         rel(pivot_norm(vec_axpy(cplx(-1.0, 0.0), f, sum)), fscale),
         // Hermitian: <Pf, g>_0 = <f, Pg>_0
         rel(std::abs(pivot_inner(f2, g) - pivot_inner(f, g2)), fscale * gscale),
         rel(std::abs(pivot_inner(f1, g) - pivot_inner(f, g1)), fscale * gscale)});

    // (b) contractivity in both triple norms
    const double fp = plus_norm(t, f);
    const double fm = minus_norm(t, f);
    rep.contractivity = std::max(
        {rep.contractivity, rel(plus_norm(t, f2) - fp, fp),
         rel(plus_norm(t, f1) - fp, fp), rel(minus_norm(t, f2) - fm, fm),
         rel(minus_norm(t, f1) - fm, fm)});

    // (c) orthogonality of the two parts in all three inner products
    const double oscale = fscale * fscale;
    rep.orthogonality =
        std::max({rep.orthogonality, rel(std::abs(pivot_inner(f1, f2)), oscale),
                  rel(std::abs(plus_inner(t, f1, f2)),
                      std::max(1.0, plus_norm(t, f1) * plus_norm(t, f2))),
                  rel(std::abs(minus_inner(t, f1, f2)),
                      std::max(1.0, minus_norm(t, f1) * minus_norm(t, f2)))});

    // (d) spectral-bound norm inequalities per component
    const auto one_sided = [&](double lhs, double rhs, double scale) {
      // Requires lhs >= rhs up to rounding; positive excess is the residual.
      rep.norm_inequalities =
          std::max(rep.norm_inequalities, rel(rhs - lhs, scale));
    };
    if (!f1.empty()) {
      one_sided(plus_norm(t, f1), s.component1.sqw_inf * pivot_norm(f1),
                plus_norm(t, f1));
      one_sided((1.0 / s.component1.sqw_inf) * pivot_norm(f1),
                minus_norm(t, f1), pivot_norm(f1));
    }
    if (!f2.empty()) {
      one_sided(s.component2.sqw_sup * pivot_norm(f2), plus_norm(t, f2),
                s.component2.sqw_sup * pivot_norm(f2));
      one_sided(minus_norm(t, f2), (1.0 / s.component2.sqw_sup) * pivot_norm(f2),
                minus_norm(t, f2));
    }

    // (e) cross-duality: opposite components never pair
    rep.cross_duality = std::max(
        {rep.cross_duality,
         rel(std::abs(pairing(t, g1, f2)), fscale * gscale),
         rel(std::abs(pairing(t, g2, f1)), fscale * gscale)});
  }

  rep.tolerance_used = t.tolerance.scaled_algebraic(kappa);
  rep.pass = rep.max_residual() <= rep.tolerance_used;
  return rep;
}

// ── reassembly: X_+ = X_+^1 (+) X_-^2 ───────────────────────────────────────

// f1 must live in component 1 and f2 in component 2; the sum is then
// orthogonal in all the triple's inner products, so the plus norms add
// Pythagorean-style. Membership is checked with the projections themselves.
inline CoeffVector recompose(const SpectralSplit& s, const CoeffVector& f1,
                             const CoeffVector& f2) {
  const double tol = 1e-12;
  const double r1 =
      pivot_norm(vec_axpy(cplx(-1.0, 0.0), f1, s.proj_unbounded.apply(f1)));
  const double r2 =
      pivot_norm(vec_axpy(cplx(-1.0, 0.0), f2, s.proj_bounded.apply(f2)));
  if (r1 > tol * std::max(1.0, pivot_norm(f1)))
    throw ComponentLeak("recompose: first argument leaks outside component 1");
  if (r2 > tol * std::max(1.0, pivot_norm(f2)))
    throw ComponentLeak("recompose: second argument leaks outside component 2");
  return vec_axpy(cplx(1.0, 0.0), f1, f2);
}

}  // namespace qgt
