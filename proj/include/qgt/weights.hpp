#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qgt/errors.hpp"
#include "qgt/interval.hpp"

namespace qgt {

// Diagonal weight families over the index set Z\{0}.
//
//   paper_ell2          w(n) = n^2,  w(-n) = 1/n^2   (n > 0)
//   power(alpha,mirror) w(n) = |n|^alpha for n > 0; the negative side is
//                       |n|^{-alpha} when mirrored (the paper_ell2 shape) or
//                       |n|^{alpha} when not
//   table               finite overrides on top of a constant default weight
//
// All weights are strictly positive, which is exactly the injectivity of the
// diagonal operator they induce.
class WeightSpec {
 public:
  enum class Kind { paper_ell2, power, table };

  static WeightSpec paper_ell2() {
    WeightSpec w;
    w.kind_ = Kind::paper_ell2;
    w.alpha_ = 2.0;
    w.mirror_ = true;
    return w;
  }

  static WeightSpec power(double alpha, bool mirror = true) {
    WeightSpec w;
    w.kind_ = Kind::power;
    w.alpha_ = alpha;
    w.mirror_ = mirror;
    return w;
  }

  static WeightSpec table(std::map<std::int64_t, double> entries,
                          double default_weight) {
    if (!(default_weight > 0.0))
      throw NotInjective("table weight: default weight must be positive");
    for (const auto& [i, w] : entries) {
      if (i == 0) throw Error("table weight: index 0 does not exist");
      if (!(w > 0.0))
        throw NotInjective("table weight: nonpositive weight at index " +
                           std::to_string(i));
    }
    WeightSpec w;
    w.kind_ = Kind::table;
    w.entries_ = std::move(entries);
    w.default_ = default_weight;
    return w;
  }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  bool mirrored() const { return mirror_; }
  const std::map<std::int64_t, double>& entries() const { return entries_; }
  double default_weight() const { return default_; }

  double weight(std::int64_t i) const {
    if (i == 0) throw IndexSetMismatch("weight: index 0 does not exist");
    if (kind_ == Kind::table) {
      const auto it = entries_.find(i);
      return it == entries_.end() ? default_ : it->second;
    }
    return std::pow(static_cast<double>(std::llabs(i)), side_exponent(i) * 2.0);
  }

  double sqrt_weight(std::int64_t i) const {
    if (i == 0) throw IndexSetMismatch("sqrt_weight: index 0 does not exist");
    if (kind_ == Kind::table) return std::sqrt(weight(i));
    return std::pow(static_cast<double>(std::llabs(i)), side_exponent(i));
  }

  // Exponent e with sqrt(w(i)) = |i|^e on the side of i (power families).
  double side_exponent(std::int64_t i) const {
    const double e = alpha_ / 2.0;
    return (i > 0 || !mirror_) ? e : -e;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::paper_ell2:
        return "w(n)=n^2, w(-n)=1/n^2";
      case Kind::power: {
        std::ostringstream os;
        os << "w(n)=|n|^" << alpha_
           << (mirror_ ? ", w(-n)=|n|^-" : ", w(-n)=|n|^") << alpha_;
        return os.str();
      }
      case Kind::table:
        return "table with " + std::to_string(entries_.size()) +
               " overrides, default " + std::to_string(default_);
    }
    return {};
  }

 private:
  WeightSpec() = default;

  Kind kind_ = Kind::paper_ell2;
  double alpha_ = 2.0;
  bool mirror_ = true;
  std::map<std::int64_t, double> entries_;
  double default_ = 1.0;
};

// Summary of { i : sqrt(w(i)) in S } for an interval union S: cardinality
// (possibly infinite), extremal matched sqrt-weights, and an index-predicate
// description. Counting inverts the monotone power map per side and then
// repairs the integer boundaries with the very membership predicate the
// spectral projections use, so counting and projecting cannot disagree at
// interval endpoints.
struct WeightMatch {
  bool infinite = false;
  std::int64_t count = 0;  // valid when !infinite
  double sqw_inf = kInf;   // kInf when nothing matches
  double sqw_sup = 0.0;    // 0 when nothing matches

  // One human-readable piece per matched index block, e.g. "n in [2, 5]".
  std::string description;

  bool any() const { return infinite || count > 0; }

  static WeightMatch analyze(const WeightSpec& w, const IntervalSet& s) {
    WeightMatch m;
    std::vector<std::string> pieces;
    if (w.kind() == WeightSpec::Kind::table) {
      m.analyze_table(w, s, pieces);
    } else {
      m.analyze_power_side(w, s, /*positive=*/true, pieces);
      m.analyze_power_side(w, s, /*positive=*/false, pieces);
    }
    if (pieces.empty()) {
      m.description = "no indices";
    } else {
      std::ostringstream os;
      for (std::size_t k = 0; k < pieces.size(); ++k)
        os << (k ? "; " : "") << pieces[k];
      m.description = os.str();
    }
    return m;
  }

 private:
  void absorb(double sqw) {
    sqw_inf = std::min(sqw_inf, sqw);
    sqw_sup = std::max(sqw_sup, sqw);
  }

  void analyze_table(const WeightSpec& w, const IntervalSet& s,
                     std::vector<std::string>& pieces) {
    for (const auto& [i, wi] : w.entries()) {
      if (s.contains(std::sqrt(wi))) {
        ++count;
        absorb(std::sqrt(wi));
        pieces.push_back("index " + std::to_string(i));
      }
    }
    const double dsq = std::sqrt(w.default_weight());
    if (s.contains(dsq)) {
      // Constant default weight on the rest of Z\{0}: infinitely many indices.
      infinite = true;
      absorb(dsq);
      pieces.push_back("all indices without an override");
    }
  }

  // One monotone side of a power family: indices sign*n, n >= 1, with
  // sqrt-weight n^e. For each interval (a,b] the matched n form a contiguous
  // block, possibly extending to infinity.
  void analyze_power_side(const WeightSpec& w, const IntervalSet& s,
                          bool positive, std::vector<std::string>& pieces) {
    const double e = w.side_exponent(positive ? 1 : -1);
    const char* tag = positive ? "n" : "-n";
    const auto sqw = [e](std::int64_t n) {
      return std::pow(static_cast<double>(n), e);
    };

    if (e == 0.0) {
      if (s.contains(1.0)) {
        infinite = true;
        absorb(1.0);
        pieces.push_back(std::string("all ") + tag + " for n >= 1");
      }
      return;
    }

    for (const auto& part : s.parts()) {
      std::int64_t lo = 1;
      std::int64_t hi = 0;
      bool unbounded = false;

      if (e > 0.0) {
        // Increasing side: a < n^e requires large n, n^e <= b caps it.
        lo = first_true(guess(part.a, e),
                        [&](std::int64_t n) { return sqw(n) > part.a; });
        if (part.bounded()) {
          hi = last_true(guess(part.b, e),
                         [&](std::int64_t n) { return sqw(n) <= part.b; });
        } else {
          unbounded = true;
        }
      } else {
        // Decreasing side: n^e <= b requires large n, n^e > a caps it.
        lo = part.bounded()
                 ? first_true(guess(part.b, e),
                              [&](std::int64_t n) { return sqw(n) <= part.b; })
                 : 1;
        if (part.a > 0.0) {
          hi = last_true(guess(part.a, e),
                         [&](std::int64_t n) { return sqw(n) > part.a; });
        } else {
          unbounded = true;  // weights accumulate at 0 inside (0, b]
        }
      }

      if (unbounded) {
        infinite = true;
        absorb(sqw(lo));
        if (e > 0.0)
          sqw_sup = kInf;
        else
          sqw_inf = 0.0;
        pieces.push_back(std::string(tag) + " for n >= " + std::to_string(lo));
      } else if (hi >= lo) {
        count += hi - lo + 1;
        absorb(sqw(lo));
        absorb(sqw(hi));
        if (lo == hi)
          pieces.push_back(std::string(tag) + " for n = " + std::to_string(lo));
        else
          pieces.push_back(std::string(tag) + " for n in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
    }
  }

  // Float guess for the integer near t^(1/e), clamped to [1, enumerable].
  static std::int64_t guess(double t, double e) {
    if (t <= 0.0) return 1;
    const long double g = std::pow(static_cast<long double>(t), 1.0L / e);
    if (!(g < 4e15L))
      throw InvalidInterval(
          "interval boundary inverts beyond enumerable index range for this "
          "weight family");
    if (g < 1.0L) return 1;
    return static_cast<std::int64_t>(g);
  }

  // Smallest n >= 1 with pred(n), where pred is false below a threshold near
  // the guess and true above it.
  static std::int64_t first_true(std::int64_t near,
                                 const std::function<bool(std::int64_t)>& pred) {
    std::int64_t n = std::max<std::int64_t>(1, near - 4);
    while (!pred(n)) ++n;
    while (n > 1 && pred(n - 1)) --n;
    return n;
  }

  // Largest n >= 1 with pred(n), where pred is true up to a threshold near the
  // guess and false above it; returns 0 when even n = 1 fails.
  static std::int64_t last_true(std::int64_t near,
                                const std::function<bool(std::int64_t)>& pred) {
    std::int64_t n = near + 4;
    while (n >= 1 && !pred(n)) --n;
    if (n < 1) return 0;
    while (pred(n + 1)) ++n;
    return n;
  }
};

}  // namespace qgt
