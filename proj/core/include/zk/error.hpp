#pragma once

#include <stdexcept>
#include <string>

namespace zk {

// Base for all library failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

// Raised when a documented hypothesis of a check does not hold.
class PreconditionFailure : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, int mode) : Error(what), mode_(mode) {}
    int mode() const noexcept { return mode_; }

private:
    int mode_;
};

class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace zk
