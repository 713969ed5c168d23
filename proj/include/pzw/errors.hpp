#ifndef PZW_ERRORS_HPP
#define PZW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pzw {

// Malformed input file (bad token, wrong column count, truncation, ...).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid scenario configuration or inconsistent module arguments.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runtime numerical failure (step-size underflow, norm drift, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation outside a gridded field's window; extrapolation is never silent.
class FieldRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pzw

#endif
