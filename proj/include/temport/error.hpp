#pragma once

#include <stdexcept>

namespace temport {

// Input data rejected during parsing or validation. The CLI maps this to
// exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace temport
