#pragma once

#include <stdexcept>
#include <string>

namespace colim {

// Shape or index incompatibility between vectors, operators or chain stages.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// NaN/Inf is never admitted into a stored vector or operator.
struct NotFinite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A map (or a whole chain/cocone) does not belong to the class it was
// declared with, or an operation refuses the declared class outright.
struct CategoryViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally broken input (tail rule constraints, prefix shapes, ...).
struct InvalidStructure : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A cocone handed to induced_apply fails the compatibility condition.
struct InvalidCocone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A heuristic limit estimate straddles a decision threshold.
struct IndeterminateResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed chain description file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace colim
