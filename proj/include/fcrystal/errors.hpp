#pragma once

#include <stdexcept>
#include <string>

namespace fcrystal {

// Base of every error raised by the toolkit. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPrime : public Error {
public:
    using Error::Error;
};

class ContextMismatch : public Error {
public:
    ContextMismatch() : Error("operands belong to different Witt contexts") {}
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class HenselFailure : public Error {
public:
    using Error::Error;
};

// A computation would need more p-adic digits than the context carries.
// `needed` is the smallest precision known to suffice, or 0 when unknown.
class PrecisionExhausted : public Error {
public:
    PrecisionExhausted(const std::string& what, int needed)
        : Error(what), needed_(needed) {}
    int needed() const noexcept { return needed_; }

private:
    int needed_;
};

class SingularAtPrecision : public Error {
public:
    using Error::Error;
};

class NonIntegralRescale : public Error {
public:
    using Error::Error;
};

class NotIsoclinic : public Error {
public:
    using Error::Error;
};

class SlopeOrderViolated : public Error {
public:
    using Error::Error;
};

class NotACycle : public Error {
public:
    using Error::Error;
};

class RankTooSmall : public Error {
public:
    using Error::Error;
};

class BadParameters : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace fcrystal
