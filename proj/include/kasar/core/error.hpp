#pragma once

#include <stdexcept>
#include <string>

namespace kasar {

/// Input rejected by a precondition check.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dataset or config file that cannot be decoded.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dataset of the wrong kind was handed to a command.
class KindMismatch : public FormatError {
public:
    using FormatError::FormatError;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InputError(what);
}

}  // namespace kasar
