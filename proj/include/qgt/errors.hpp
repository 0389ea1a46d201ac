#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgt {

// Base class for all domain errors thrown by this library. Everything that is
// a *caller* mistake (mismatched index sets, bad exponents, ...) derives from
// this; plain std::invalid_argument is reserved for programming errors such as
// unsupported functional-calculus powers.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two vectors (or a vector and an operator) live over different index sets.
struct IndexSetMismatch : Error {
  using Error::Error;
};

// A spectral interval is empty, unbounded where boundedness is required, or
// extends below zero.
struct InvalidInterval : Error {
  using Error::Error;
};

// A matrix or sesquilinear form fails the Hermitian symmetry check.
struct NotSelfAdjoint : Error {
  using Error::Error;
};

// Spectrum touches zero or goes negative: the operator cannot be the Gram
// operator of a triple. Restricting to the closure of the range splits off
// the kernel; that restriction is the caller's explicit choice, never done
// silently here.
struct NotInjective : Error {
  using Error::Error;
};

// A matrix required to be invertible (pairing matrix, change-of-pairing
// isomorphism) is singular to working precision.
struct NotInvertible : Error {
  using Error::Error;
};

// An operation that needs a nonzero vector received an empty one.
struct EmptyVector : Error {
  using Error::Error;
};

// An integer range ran backwards (m > n).
struct InvalidRange : Error {
  using Error::Error;
};

// Exponent outside (1, inf) where a Lebesgue-type exponent is required.
struct InvalidExponent : Error {
  using Error::Error;
};

// Inputs claimed to live in complementary spectral components overlap.
struct ComponentLeak : Error {
  using Error::Error;
};

// JSON or config input that does not match the documented formats.
struct ParseError : Error {
  using Error::Error;
};

// The greedy Cesaro selection ran out of candidates before picking N
// vectors. Carries the indices selected so far so callers can inspect the
// partial subsequence.
struct SelectionExhausted : Error {
  std::vector<std::size_t> partial_indices;

  SelectionExhausted(const std::string& what, std::vector<std::size_t> partial)
      : Error(what), partial_indices(std::move(partial)) {}
};

}  // namespace qgt
