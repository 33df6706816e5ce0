#ifndef ABO_ERRORS_HPP
#define ABO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abo {

/// Caller broke a precondition (dimension mismatch, h < 1, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A kernel, prior or configuration value is outside its valid range.
class InvalidSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidObservation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky of (K + sigma^2 I) failed even after jitter escalation.
class SingularModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace abo

#endif // ABO_ERRORS_HPP
