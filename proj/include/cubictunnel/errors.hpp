#pragma once

#include <stdexcept>
#include <string>

namespace cubictunnel {

// Base for all domain-of-validity violations. CLI maps this family to exit code 2.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Non-positive or otherwise unusable physical inputs.
class ParameterDomainError : public DomainError {
public:
    explicit ParameterDomainError(const std::string& what) : DomainError(what) {}
};

// Requested temperature above the crossover: no periodic tunneling orbit exists there.
class QuantumRegimeError : public DomainError {
public:
    explicit QuantumRegimeError(const std::string& what) : DomainError(what) {}
};

// Evaluation requested exactly on a logarithmic divergence (e.g. K(p) at p = 1).
class DivergenceError : public DomainError {
public:
    explicit DivergenceError(const std::string& what) : DomainError(what) {}
};

// A least-squares feature fit was asked for with insufficient or degenerate data.
class FitError : public DomainError {
public:
    explicit FitError(const std::string& what) : DomainError(what) {}
};

} // namespace cubictunnel
