#pragma once

#include <stdexcept>
#include <string>

namespace phasebound {

/// Precondition errors mean the caller asked for something outside the
/// supported domain; numerical errors mean a solver gave up.
enum class ErrorCategory { precondition, numerical };

class Error : public std::runtime_error {
public:
    Error(const std::string& what, ErrorCategory category)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

#define PHASEBOUND_ERROR(Name, Category)                                     \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what)                               \
            : Error(#Name ": " + what, ErrorCategory::Category) {}           \
    };

PHASEBOUND_ERROR(InvalidParams, precondition)
PHASEBOUND_ERROR(EvalAtSingularity, precondition)
PHASEBOUND_ERROR(DivergentPrimitive, precondition)
PHASEBOUND_ERROR(NearEigenvalue, precondition)
PHASEBOUND_ERROR(NotAnEigenstate, precondition)
PHASEBOUND_ERROR(ConditionViolated, precondition)
PHASEBOUND_ERROR(ExcludedCase, precondition)
PHASEBOUND_ERROR(InsideGap, precondition)
PHASEBOUND_ERROR(NotClosed, precondition)
PHASEBOUND_ERROR(IndexOutOfRange, precondition)

PHASEBOUND_ERROR(QuadratureFailure, numerical)
PHASEBOUND_ERROR(NonMonotoneResolutionFailure, numerical)
PHASEBOUND_ERROR(DomainTooSmall, numerical)
PHASEBOUND_ERROR(StiffnessFailure, numerical)
PHASEBOUND_ERROR(BracketMiss, numerical)
PHASEBOUND_ERROR(SolverFailure, numerical)
PHASEBOUND_ERROR(TurningPointFailure, numerical)

#undef PHASEBOUND_ERROR

/// Process exit code for a caught error: 2 for precondition, 1 for numerical.
int exit_code(const Error& e) noexcept;

} // namespace phasebound
