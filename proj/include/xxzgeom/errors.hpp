#pragma once

#include <stdexcept>
#include <string>

namespace xxzgeom {

/// Input violates an operation's precondition (shape, hermiticity, range).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested quantity does not exist for these physical parameters
/// (for example a brachistochrone time without decoherence).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed command line or configuration file.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace xxzgeom
