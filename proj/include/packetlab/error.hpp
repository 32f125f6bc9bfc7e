#pragma once

#include <stdexcept>
#include <string>

namespace packetlab {

/// Raised when an input violates an operation's precondition.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace packetlab
