#pragma once

#include <stdexcept>
#include <string>

namespace mumimo {

// Invalid parameter values or combinations. Maps to CLI exit code 2.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iterative method failed to converge, or a matrix was numerically singular.
// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficiencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Request exceeds a memory/time guard (e.g. explicit codebook too large).
class CapacityError : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mumimo
