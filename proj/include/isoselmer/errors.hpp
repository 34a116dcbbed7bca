#pragma once

#include <stdexcept>
#include <string>

namespace isoselmer {

// Precondition violated by the caller (zero input, composite modulus, d outside
// the twisting set, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A configured bound (factorization range, supporting-set cap, integer width)
// was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Singular Weierstrass data: b = 0 or a^2 - 4b = 0.
class InvalidModel : public DomainError {
public:
    using DomainError::DomainError;
};

// a^2 - 4b is a perfect square, so E(Q)[2] is the full 2-torsion.
class FullTwoTorsion : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedConfiguration : public DomainError {
public:
    using DomainError::DomainError;
};

// Raised when an algorithm reaches a state that its invariants rule out.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace isoselmer
