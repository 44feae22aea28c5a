#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amc {

/// A request needs more prime data than the table (or the extended
/// resolver) can provide.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (log log of n < 2,
/// zeta at s <= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Index or value past the stored range of a table.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Precondition of an operation violated by the caller.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace amc
