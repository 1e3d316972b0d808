#ifndef BHC_ERRORS_HPP
#define BHC_ERRORS_HPP

#include <stdexcept>

namespace bhc {

// Malformed or precondition-violating input.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A structure would be too large to materialize (dense complement, n^r overflow).
struct capacity_error : std::length_error {
  using std::length_error::length_error;
};

// A search ran out of its node or time budget before deciding.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derived parameters are out of their meaningful range.
struct parameter_error : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace bhc

#endif
