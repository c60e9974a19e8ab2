#pragma once

#include <stdexcept>
#include <string>

namespace nlsv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed configuration, violated precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// NaN/Inf appeared during a computation.
class NumericalBreakdown : public Error {
public:
    NumericalBreakdown(const std::string& what, long step = -1)
        : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// The computation finished but its validity gate failed (edge mass, floor, ...).
class InvalidRun : public Error {
public:
    using Error::Error;
};

/// Discretization too coarse for the requested tolerance.
class AccuracyError : public Error {
public:
    using Error::Error;
};

}  // namespace nlsv
