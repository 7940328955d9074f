#pragma once

#include <stdexcept>
#include <string>

namespace degenlab {

// Every thrown error carries a stable machine-readable kind, used by the CLI
// when it reports failures as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Bad input: wrong domain, violated precondition, invalid configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown during a computation (divergence, underflow, guard trips).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace degenlab
