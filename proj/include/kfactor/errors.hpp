#pragma once

#include <stdexcept>
#include <string>

namespace kfactor {

// Malformed or out-of-contract input (bad degrees, parity, size mismatch).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the range an engine is willing to handle
// (e.g. n too large for exhaustive enumeration).
class regime_refused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kfactor
