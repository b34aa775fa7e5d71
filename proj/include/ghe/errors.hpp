#pragma once

#include <stdexcept>
#include <string>

namespace ghe {

/// Invalid parameter set or contract description, raised at construction.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (x = 0 for a density, z < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iteration failed to converge or produced non-finite values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ghe
