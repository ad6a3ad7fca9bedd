#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qaoacut {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad numeric parameters (parity, ranges, sizes).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// A configured cap (vertex count, width, memory) would be exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Caller broke a precondition that would make the result undefined.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// An external solver violated the line protocol.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// A lookup table lacks some of the subgraph classes a computation needs.
class CoverageError : public InputError {
public:
    CoverageError(const std::string &what, std::vector<std::string> missing)
        : InputError(what), missing_(std::move(missing)) {}

    const std::vector<std::string> &missing() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

} // namespace qaoacut
