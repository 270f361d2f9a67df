#pragma once

#include <stdexcept>
#include <string>

namespace relcov {

/// Argument outside the mathematical domain (beta >= 1, non-unit direction, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input violates a numerical precondition such as the mass shell.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double violation)
        : std::runtime_error(what), violation_(violation) {}

    double violation() const noexcept { return violation_; }

private:
    double violation_;
};

/// A matrix lacks the block structure an operation relies on.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The two-branch scenario collapses (e.g. zero particle speed).
class DegenerateScenarioError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computed quantity disagrees with its invariant or closed form.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace relcov
