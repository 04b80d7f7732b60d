#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

// Argument outside the domain where a formula or approximation is valid.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Linear estimator with zero slope: omega cannot be inverted from P = x + y*omega.
class DegenerateEstimator : public DomainError {
public:
    using DomainError::DomainError;
};

// Optimizer failed to converge or found no interior optimum.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// T1 == T1' : the bias-variance balance has no finite optimal time.
class NoFiniteOptimum : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace zeno
