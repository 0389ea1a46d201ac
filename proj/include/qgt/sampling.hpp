#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qgt/core.hpp"
#include "qgt/rng.hpp"

namespace qgt {

// Random index drawn from the coordinate domain. Symmetric-integer draws are
// confined to a window around the origin: finite-support elements are the
// only representable ones anyway, and a +/-window keeps the touched weights
// of analytic families at desk scale.
inline std::int64_t random_index(Rng& rng, const IndexSet& set,
                                 std::int64_t window = 8) {
  if (set.kind() == IndexSet::Kind::finite) return rng.next_int(1, set.size());
  const std::int64_t i = rng.next_int(-window, window - 1);
  return i >= 0 ? i + 1 : i;  // skip 0
}

// Random finite-support vector with 1..max_support entries, complex Gaussian
// coefficients. Distinct indices are enforced by redraw.
inline CoeffVector random_vector(Rng& rng, const IndexSet& set,
                                 std::int64_t max_support = 4,
                                 std::int64_t window = 8) {
  const std::int64_t target = rng.next_int(1, max_support);
  CoeffVector v(set);
  std::int64_t guard = 0;
  while (static_cast<std::int64_t>(v.support_size()) < target && guard++ < 64)
    v.set(random_index(rng, set, window), rng.next_complex_gaussian());
  return v;
}

}  // namespace qgt
