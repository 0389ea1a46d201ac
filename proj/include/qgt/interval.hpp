#pragma once

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qgt/errors.hpp"

namespace qgt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-open interval (a, b] on the positive real axis; b may be +inf. The
// half-open convention is load-bearing: spectral cuts put boundary points on
// the bounded side, exactly like the projection onto (0,1].
struct Interval {
  double a = 0.0;
  double b = kInf;

  Interval() = default;
  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!(a >= 0.0))
      throw InvalidInterval("interval lower endpoint must be >= 0");
    if (!(a < b))
      throw InvalidInterval("interval (a,b] requires a < b");
  }

  bool contains(double x) const { return x > a && x <= b; }
  bool bounded() const { return b < kInf; }
};

// Finite union of disjoint half-open intervals, kept sorted and merged. This
// is the only cut-set shape the spectral machinery accepts; general Borel
// sets are out of scope by design.
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(Interval single) { parts_.push_back(single); normalize(); }

  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    normalize();
  }

  static IntervalSet unit() { return IntervalSet(Interval(0.0, 1.0)); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  bool contains(double x) const {
    for (const auto& p : parts_)
      if (p.contains(x)) return true;
    return false;
  }

  bool bounded() const {
    return parts_.empty() || parts_.back().bounded();
  }

  double sup() const { return parts_.empty() ? 0.0 : parts_.back().b; }
  double inf() const { return parts_.empty() ? 0.0 : parts_.front().a; }

  // Complement within (0, inf), again a finite union of half-open pieces.
  IntervalSet complement() const {
    std::vector<Interval> out;
    double cursor = 0.0;
    for (const auto& p : parts_) {
      if (p.a > cursor) out.emplace_back(cursor, p.a);
      cursor = p.b;
    }
    if (cursor < kInf) out.emplace_back(cursor, kInf);
    IntervalSet c;
    c.parts_ = std::move(out);
    return c;  // already sorted and disjoint
  }

  std::string describe() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (k) os << " U ";
      os << "(" << parts_[k].a << ", ";
      if (parts_[k].bounded())
        os << parts_[k].b << "]";
      else
        os << "inf)";
    }
    if (parts_.empty()) os << "{}";
    return os.str();
  }

 private:
  void normalize() {
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> merged;
    for (const auto& p : parts_) {
      // (a,b] and (b,c] glue into (a,c]; overlaps merge likewise.
      if (!merged.empty() && p.a <= merged.back().b) {
        merged.back().b = std::max(merged.back().b, p.b);
      } else {
        merged.push_back(p);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

}  // namespace qgt
