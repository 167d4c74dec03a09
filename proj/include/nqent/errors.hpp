#pragma once

#include <stdexcept>
#include <string>

namespace nqent {

// Bad inputs: parameters outside their domain, incompatible pair classes,
// malformed configuration. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File system failures while reading configs or writing results. Exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical result violated an invariant that holds in exact arithmetic.
class NumericalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace nqent
