#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

/// Invalid input: malformed tables, mismatched spaces, violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input is well-formed but the requested object does not exist
/// (e.g. no coupling has the given marginals).
class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace maslov
