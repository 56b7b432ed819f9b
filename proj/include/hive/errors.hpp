#pragma once

#include <stdexcept>
#include <string>

namespace hive {

// Two families of failure: the input is wrong (DomainError) or a numerical
// routine could not deliver (SolverError). The CLI maps them to exit codes
// 1 and 2 respectively.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedDocument : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

class DomainViolation : public DomainError {
public:
    using DomainError::DomainError;
};

class NoActiveFamily : public DomainError {
public:
    using DomainError::DomainError;
};

class TooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class SolverDivergence : public SolverError {
public:
    using SolverError::SolverError;
};

class NoConvergence : public SolverError {
public:
    using SolverError::SolverError;
};

class FDFailure : public SolverError {
public:
    using SolverError::SolverError;
};

class BranchLost : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace hive
