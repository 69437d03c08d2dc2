#ifndef MIXFAIR_ERRORS_HPP
#define MIXFAIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixfair {

/// Invalid instance data.  `where` is a JSON pointer or "line L, column C".
class InstanceError : public std::runtime_error
{
public:
    InstanceError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)), message_(what)
    {}
    const std::string& where() const noexcept { return where_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string where_;
    std::string message_;
};

/// A caller violated an operation's precondition (wrong agent count, eps <= 0, ...).
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver invariant failed at runtime.  Always an implementation bug.
class InvariantViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Brute-force enumeration would exceed its hard cap.
class BudgetExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace mixfair

#endif // MIXFAIR_ERRORS_HPP
