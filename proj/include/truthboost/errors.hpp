#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace truthboost {

/// Bad input such as a shape mismatch or a malformed file. The CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A CSV/JSON input that does not parse. Carries the 1-based line number when known.
class parse_error : public validation_error {
public:
    parse_error(const std::string &message, std::size_t line)
        : validation_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The numbers cannot be produced, e.g. an infinite weight or a risk without minimizer.
/// The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace truthboost
