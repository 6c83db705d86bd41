#pragma once

#include <stdexcept>

namespace fusemot {

// Bad input data or configuration: unreadable files, malformed records,
// parameter values outside their domain. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A broken internal invariant. Indicates a bug, not bad input. CLI exit code 3.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fusemot
