#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tropica {

// Base class for every error the library raises on bad input or an
// undefined operation. Internal invariant violations use std::logic_error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Additive negation of the bottom scalar -inf (it has no inverse).
struct InversionOfBottom : Error {
  InversionOfBottom() : Error("cannot invert -inf") {}
};

// Multiplicative inverse of the bottom element of the fraction semifield.
struct BottomInverse : Error {
  BottomInverse() : Error("cannot invert the -inf element") {}
};

struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct VarOutOfRange : Error {
  int index;
  int n_vars;
  VarOutOfRange(int idx, int n)
      : Error("variable x" + std::to_string(idx) + " out of range 1..x" +
              std::to_string(n)),
        index(idx),
        n_vars(n) {}
};

// Sampling grid would exceed the 10^7-point budget.
struct BoxTooLarge : Error {
  BoxTooLarge() : Error("sampling grid exceeds 10^7 points") {}
};

// Exact cell enumeration is restricted to n <= 3.
struct DimensionTooLarge : Error {
  DimensionTooLarge() : Error("cell enumeration supports at most 3 variables") {}
};

struct InvalidSubgraph : Error {
  explicit InvalidSubgraph(const std::string& what)
      : Error("invalid subgraph: " + what) {}
};

struct BottomNegation : Error {
  BottomNegation() : Error("cannot negate the bottom function") {}
};

struct BottomDivisor : Error {
  BottomDivisor() : Error("the bottom function has no divisor") {}
};

// Point-map evaluation is only defined away from infinity.
struct InfinitePoint : Error {
  InfinitePoint() : Error("operation requires a finite point") {}
};

}  // namespace tropica
