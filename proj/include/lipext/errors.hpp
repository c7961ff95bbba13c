#pragma once

#include <stdexcept>
#include <string>

namespace lipext {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point or word lies outside the domain of a map.
class DomainError : public Error {
public:
    using Error::Error;
};

// The system or configuration violates a structural precondition.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class SeparationViolation : public Error {
public:
    using Error::Error;
};

class InsufficientDepth : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class NotOnAttractor : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

// Malformed input files; the CLI maps these to exit status 2.
class InputError : public Error {
public:
    using Error::Error;
};

// A sampled inequality or bound failed; carries the violating witness.
class CertificationError : public Error {
public:
    CertificationError(const std::string& what, std::string witness)
        : Error(what + " [witness: " + witness + "]"), witness_(std::move(witness)) {}

    const std::string& witness() const { return witness_; }

private:
    std::string witness_;
};

// A pipeline stage could not build its object.
class ConstructionError : public Error {
public:
    ConstructionError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace lipext
