#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgt/core.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/rng.hpp"
#include "qgt/triple.hpp"
#include "qgt/weights.hpp"

namespace qgt {

// ── named ready-made triples ────────────────────────────────────────────────

struct TripleInstance {
  std::string name;
  QuasiTriple triple;
  std::string notes;  // what the instance demonstrates
};

namespace detail {

// Every catalog construction must survive operator validation and a spot
// check of the pairing identity before it is handed out.
inline TripleInstance checked_instance(std::string name, GramOperator g,
                                       std::string notes) {
  TripleInstance inst{std::move(name), make_triple(std::move(g)),
                      std::move(notes)};
  const PairingCheckReport rep = check_pairing_identity(inst.triple, 25, 1);
  if (!rep.pass)
    throw Error("catalog instance '" + inst.name +
                "' fails the pairing identity spot check");
  return inst;
}

}  // namespace detail

// The doubly infinite sequence space with weight n^2 on positive indices and
// n^{-2} on negative ones. Both embeddings are unbounded: no constant c gives
// ||f||_0 <= c||f||_+ (take e_{-n}) or ||f||_+ <= c||f||_0 (take e_n).
inline TripleInstance paper_ell2_triple() {
  return detail::checked_instance(
      "paper-ell2", GramOperator::analytic(WeightSpec::paper_ell2()),
      "weights n^2 (n>0) and n^-2 (n<0) over the nonzero integers; both "
      "embeddings unbounded");
}

inline TripleInstance identity_triple(std::int64_t n) {
  return detail::checked_instance(
      "identity-" + std::to_string(n), GramOperator::identity(n),
      "all three norms coincide; the trivial continuous case");
}

inline TripleInstance diag_4_1_quarter_triple() {
  return detail::checked_instance(
      "diag-4-1-quarter", GramOperator::finite_diagonal({4.0, 1.0, 0.25}),
      "3-dimensional diagonal spectrum {4, 1, 1/4}, condition 16; smallest "
      "example with weights on both sides of 1");
}

// ── Cauchy-in-plus, divergent-in-pivot demonstration ────────────────────────

struct CauchyDemo {
  double plus_increment = 0.0;   // ||sum_{i=m}^{n} e_{-i}||_+
  double pivot_increment = 0.0;  // ||sum_{i=m}^{n} e_{-i}||_0
};

namespace detail {

// sum_{i=a}^{b} 1/i^2 by compensated summation, smallest terms first; spans
// beyond 10^6 terms switch to the midpoint tail closure
// sum_{i=a}^{inf} 1/i^2 ~ 1/(a - 1/2), accurate to O(a^-3).
inline double inverse_square_sum(std::int64_t a, std::int64_t b) {
  const std::int64_t direct_cap = 1000000;
  double tail = 0.0;
  std::int64_t hi = b;
  if (b - a + 1 > direct_cap) {
    hi = a + direct_cap - 1;
    tail = 1.0 / (static_cast<double>(hi) + 0.5) -
           1.0 / (static_cast<double>(b) + 0.5);
  }
  double sum = 0.0, comp = 0.0;
  for (std::int64_t i = hi; i >= a; --i) {
    const double x = static_cast<double>(i);
    const double term = 1.0 / (x * x) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum + tail;
}

}  // namespace detail

// Partial sums s_n = sum_{i<=n} e_{-i} in the paper-ell2 instance: the
// increment s_n - s_{m-1} has plus norm sqrt(sum 1/i^2) <= 1/sqrt(m-1) (small
// for large m, so the s_n are Cauchy in ||.||_+) but pivot norm
// sqrt(n-m+1) (unbounded, so they converge nowhere in X_0). This is the
// desk-scale witness that the plus embedding cannot be continuous.
inline CauchyDemo cauchy_demo(std::int64_t m, std::int64_t n) {
  if (m < 1) throw InvalidRange("cauchy_demo: m must be positive");
  if (m > n) throw InvalidRange("cauchy_demo: m must not exceed n");
  CauchyDemo d;
  d.plus_increment = std::sqrt(detail::inverse_square_sum(m, n));
  d.pivot_increment = std::sqrt(static_cast<double>(n - m + 1));
  return d;
}

// ── discrete Lp / Lq dual pair on a uniform grid ────────────────────────────

struct HolderReport {
  double pairing_modulus = 0.0;
  double bound = 0.0;  // minus_norm(g) * plus_norm(f)
  double ratio = 0.0;  // pairing_modulus / bound
  bool pass = false;
};

// Samples of functions on [0,1] with n midpoint cells of weight 1/n, normed
// by the quadrature p-, q- and 2-norms. Finite-dimensional, hence an ordinary
// (continuously embedded) triple: it exercises the duality inequality and the
// pairing-extension axiom, not unboundedness.
struct LpDiscreteTriple {
  double p = 2.0;
  double q = 2.0;
  std::size_t n = 1;
  std::string notes;

  static LpDiscreteTriple make(double p, std::size_t n) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw InvalidExponent("LpDiscreteTriple: p must lie in (1, inf)");
    if (n == 0)
      throw std::invalid_argument("LpDiscreteTriple: n must be positive");
    LpDiscreteTriple t;
    t.p = p;
    t.q = p / (p - 1.0);
    t.n = n;
    t.notes =
        "uniform midpoint grid; finite-dimensional, so the embeddings are "
        "continuous — demonstrates the duality inequality only";
    return t;
  }

  double cell_weight() const { return 1.0 / static_cast<double>(n); }

  GridFunction grid(std::vector<cplx> values) const {
    if (values.size() != n)
      throw IndexSetMismatch("LpDiscreteTriple: sample count mismatch");
    return GridFunction(std::move(values), cell_weight());
  }

  void check(const GridFunction& f, const char* where) const {
    if (f.values.size() != n || f.cell_weight != cell_weight())
      throw IndexSetMismatch(std::string(where) +
                             ": grid function does not match the carrier");
  }

  double plus_norm(const GridFunction& f) const {
    check(f, "plus_norm");
    double acc = 0.0;
    for (const cplx& v : f.values) acc += f.cell_weight * std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
  }

  double minus_norm(const GridFunction& g) const {
    check(g, "minus_norm");
    double acc = 0.0;
    for (const cplx& v : g.values) acc += g.cell_weight * std::pow(std::abs(v), q);
    return std::pow(acc, 1.0 / q);
  }

  double pivot_norm(const GridFunction& f) const {
    check(f, "pivot_norm");
    double acc = 0.0;
    for (const cplx& v : f.values) acc += f.cell_weight * std::norm(v);
    return std::sqrt(acc);
  }

  cplx pairing(const GridFunction& g, const GridFunction& f) const {
    check(g, "pairing");
    check(f, "pairing");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      acc += g.cell_weight * g.values[i] * std::conj(f.values[i]);
    return acc;
  }

  HolderReport holder_check(const GridFunction& f, const GridFunction& g,
                            const TolerancePolicy& tol = TolerancePolicy{}) const {
    HolderReport rep;
    rep.pairing_modulus = std::abs(pairing(g, f));
    rep.bound = minus_norm(g) * plus_norm(f);
    if (rep.bound > 0.0)
      rep.ratio = rep.pairing_modulus / rep.bound;
    else
      rep.ratio = rep.pairing_modulus > 0.0
                      ? std::numeric_limits<double>::infinity()
                      : 0.0;
    rep.pass = rep.pairing_modulus <=
               rep.bound + tol.algebraic_tol * std::max(1.0, rep.bound);
    return rep;
  }
};

inline LpDiscreteTriple lp_discrete_triple(double p, std::size_t n) {
  return LpDiscreteTriple::make(p, n);
}

// ── seeded dense SPD generator ──────────────────────────────────────────────

// Dense SPD Gram with condition number exactly `condition`: eigenvalues are
// pinned at sqrt(condition) and 1/sqrt(condition) with log-uniform interior
// values, conjugated by a seeded random unitary (QR of a Gaussian matrix with
// the phases of R's diagonal absorbed). Deterministic in (dim, condition,
// seed).
inline TripleInstance random_spd_triple(std::int64_t dim, double condition,
                                        std::uint64_t seed) {
  if (dim < 1)
    throw std::invalid_argument("random_spd_triple: dim must be positive");
  if (!(condition >= 1.0) || !std::isfinite(condition))
    throw std::invalid_argument("random_spd_triple: condition must be >= 1");

  const auto d = static_cast<Eigen::Index>(dim);
  Rng rng(subseed(seed, "random-spd"));

  Eigen::VectorXd lambda(d);
  if (d == 1) {
    lambda(0) = 1.0;
  } else {
    const double lo = 1.0 / std::sqrt(condition);
    const double hi = std::sqrt(condition);
    lambda(0) = lo;
    lambda(d - 1) = hi;
    for (Eigen::Index k = 1; k + 1 < d; ++k)
      lambda(k) = lo * std::pow(hi / lo, rng.next_double());
  }

  Eigen::MatrixXcd gauss(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) gauss(i, j) = rng.next_complex_gaussian();
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gauss);
  Eigen::MatrixXcd qmat = qr.householderQ();
  const Eigen::MatrixXcd rmat =
      qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const cplx rjj = rmat(j, j);
    if (std::abs(rjj) > 0.0) qmat.col(j) *= rjj / std::abs(rjj);
  }

  Eigen::MatrixXcd g = qmat * lambda.asDiagonal() * qmat.adjoint();
  g = (g + g.adjoint()).eval() / 2.0;  // exact Hermitian symmetry

  std::ostringstream name;
  name << "random-spd-" << dim << "-" << condition << "-" << seed;
  std::ostringstream notes;
  notes << "dense SPD operator, dimension " << dim
        << ", condition number pinned to " << condition
        << "; log-uniform spectrum under a seeded random unitary";
  return detail::checked_instance(name.str(), GramOperator::dense(g),
                                  notes.str());
}

// ── name-based lookup ───────────────────────────────────────────────────────

struct CatalogEntry {
  std::string name;
  std::string notes;
};

inline std::vector<CatalogEntry> catalog_entries() {
  return {
      {"paper-ell2",
       "doubly infinite sequence space, weights n^2 / n^-2; both embeddings "
       "unbounded"},
      {"identity-N",
       "N-dimensional identity operator; all three norms coincide (any "
       "positive N)"},
      {"diag-4-1-quarter",
       "diagonal spectrum {4, 1, 1/4}, condition 16; weights on both sides "
       "of 1"},
      {"random-spd-DIM-COND-SEED",
       "dense SPD operator with condition number COND, deterministic in "
       "SEED"},
  };
}

namespace detail {

inline bool parse_int_token(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size() && out >= 0;
}

inline bool parse_real_token(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

}  // namespace detail

inline TripleInstance catalog_lookup(const std::string& name) {
  if (name == "paper-ell2") return paper_ell2_triple();
  if (name == "diag-4-1-quarter") return diag_4_1_quarter_triple();
  if (name.rfind("identity-", 0) == 0) {
    std::int64_t n = 0;
    if (detail::parse_int_token(name.substr(9), n) && n >= 1)
      return identity_triple(n);
    throw ParseError("catalog: bad identity dimension in '" + name + "'");
  }
  if (name.rfind("random-spd-", 0) == 0) {
    const std::string rest = name.substr(11);
    const std::size_t c1 = rest.find('-');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                   : rest.find('-', c1 + 1);
    std::int64_t dim = 0, seed = 0;
    double cond = 0.0;
    if (c1 != std::string::npos && c2 != std::string::npos &&
        detail::parse_int_token(rest.substr(0, c1), dim) &&
        detail::parse_real_token(rest.substr(c1 + 1, c2 - c1 - 1), cond) &&
        detail::parse_int_token(rest.substr(c2 + 1), seed) && dim >= 1 &&
        cond >= 1.0)
      return random_spd_triple(dim, cond, static_cast<std::uint64_t>(seed));
    throw ParseError("catalog: expected random-spd-DIM-COND-SEED, got '" +
                     name + "'");
  }
  throw ParseError("catalog: unknown instance '" + name + "'");
}

}  // namespace qgt
