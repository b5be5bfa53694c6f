#ifndef IPM_ERRORS_HPP
#define IPM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ipm {

/// Thrown when a linear system turns out not to have a unique solution.
class SingularSystem : public std::runtime_error {
public:
    explicit SingularSystem(const std::string& what = "singular system")
        : std::runtime_error(what) {}
};

/// A point handed to a feasibility-checked routine is not feasible.
class NotFeasible : public std::runtime_error {
public:
    explicit NotFeasible(const std::string& what = "point is not feasible")
        : std::runtime_error(what) {}
};

/// A Newton update produced a nonpositive coordinate.
class PositivityLost : public std::runtime_error {
public:
    explicit PositivityLost(const std::string& what = "positivity lost")
        : std::runtime_error(what) {}
};

/// One of the path-following invariants failed a check.
class InvariantBroken : public std::runtime_error {
public:
    explicit InvariantBroken(const std::string& which)
        : std::runtime_error("invariant broken: " + which), which_(which) {}
    const std::string& which() const { return which_; }
private:
    std::string which_;
};

/// Hard iteration cap reached; the mu target is unreachable or nonsensical.
class IterationLimit : public std::runtime_error {
public:
    explicit IterationLimit(const std::string& what = "iteration limit reached")
        : std::runtime_error(what) {}
};

/// Support identification produced an inconsistent B/N split.
class SplitViolation : public std::runtime_error {
public:
    explicit SplitViolation(const std::string& what = "support split violation")
        : std::runtime_error(what) {}
};

/// Exact rounding of the final iterate failed a verification step.
class RoundingFailed : public std::runtime_error {
public:
    explicit RoundingFailed(const std::string& what = "rounding failed")
        : std::runtime_error(what) {}
};

/// Brute-force enumeration refused an instance above its size cap.
class OracleTooLarge : public std::runtime_error {
public:
    explicit OracleTooLarge(const std::string& what = "instance too large for oracle")
        : std::runtime_error(what) {}
};

/// Float-mode constants exceeded the representable range.
class Overflow : public std::runtime_error {
public:
    explicit Overflow(const std::string& what = "constant overflow; use exact mode")
        : std::runtime_error(what) {}
};

/// Input text could not be parsed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }
private:
    int line_;
    int column_;
};

/// Free (sign-unrestricted) variables are outside the supported model.
class FreeVariableUnsupported : public std::runtime_error {
public:
    explicit FreeVariableUnsupported(const std::string& what = "free variables unsupported")
        : std::runtime_error(what) {}
};

} // namespace ipm

#endif
