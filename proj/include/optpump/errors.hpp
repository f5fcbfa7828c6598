#pragma once

#include <stdexcept>
#include <string>

namespace optpump {

// Base of every error the library raises. The harness maps the concrete
// types onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on parameters or inputs does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to meet its accuracy contract
// (physicality breach, step-halving disagreement, insufficient decay, ...).
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Writing results to disk failed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace optpump
