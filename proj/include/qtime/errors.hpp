#pragma once

#include <stdexcept>
#include <string>

namespace qtime {

// Bad user input: malformed values, violated preconditions. CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Arguments outside the physical domain of a formula (e.g. V0 >= m). CLI exit code 2.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature, scaling or derivative evaluation failed. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qtime
