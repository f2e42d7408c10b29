#pragma once

#include <stdexcept>
#include <string>

namespace rdn {

/// Malformed input: bad parameters, non-prime modulus, dimension mismatch,
/// non-monotone reduction indices, unparsable files.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A combinatorial enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rdn
