#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polyrat {

// Invalid value for an operation (division by zero, malformed input, ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Concrete-syntax error; `position` is a 0-based offset into the input text.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

// Expression uses an operator outside the fragment required by the operation.
struct FragmentError : std::runtime_error {
    explicit FragmentError(const std::string& what) : std::runtime_error(what) {}
};

// Automaton is not in the ambiguity class the operation requires.
struct ClassMismatchError : std::runtime_error {
    explicit ClassMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration exceeded its configured budget.
struct BudgetExceededError : std::runtime_error {
    explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Kleene star applied to a sequence whose first term is not zero.
struct StarUndefinedError : std::runtime_error {
    explicit StarUndefinedError(const std::string& what) : std::runtime_error(what) {}
};

// CRA output function missing at the reached state.
struct OutputUndefinedError : std::runtime_error {
    explicit OutputUndefinedError(const std::string& what) : std::runtime_error(what) {}
};

// A substitution copies some register; `witness` names it.
struct NotCopylessError : std::runtime_error {
    std::string witness;
    explicit NotCopylessError(const std::string& reg)
        : std::runtime_error("not copyless: register " + reg + " is used more than once"),
          witness(reg) {}
};

// No register order makes all substitutions triangular; `cycle` is a witness.
struct NoNormalFormOrderError : std::runtime_error {
    std::vector<std::string> cycle;
    explicit NoNormalFormOrderError(std::vector<std::string> cyc)
        : std::runtime_error("no normal-form register order (cyclic dependency)"),
          cycle(std::move(cyc)) {}
};

// Two independent computations of the same value disagree.
struct CrossCheckError : std::runtime_error {
    explicit CrossCheckError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polyrat
