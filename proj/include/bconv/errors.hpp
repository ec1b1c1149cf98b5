#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bconv {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes: spec validation -> 2, hypothesis violations -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpecValidationError : public Error {
public:
    SpecValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class TailUnboundedError : public Error {
public:
    using Error::Error;
};

class FactorOutOfRangeError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class DominationViolationError : public Error {
public:
    using Error::Error;
};

class SpaceMismatchError : public Error {
public:
    using Error::Error;
};

class LevelTooLargeError : public Error {
public:
    using Error::Error;
};

class HypothesisViolationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace bconv
