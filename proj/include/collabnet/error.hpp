#pragma once

#include <stdexcept>
#include <string>

namespace collabnet {

/// Bad input: malformed files, violated preconditions, unknown labels.
/// The CLI maps this to exit status 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken internal invariant. The CLI maps this to exit status 2.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace collabnet
