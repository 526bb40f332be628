#pragma once

#include <stdexcept>
#include <string>

namespace rrw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// weight value does not fit in a double
class OverflowError : public Error {
 public:
  using Error::Error;
};

// a series required to converge does not
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// enumeration or grid size over its limit
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace rrw
