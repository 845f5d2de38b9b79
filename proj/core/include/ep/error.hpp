#pragma once

#include <stdexcept>
#include <string>

namespace ep {

enum class ErrorCode {
    invalid_argument,
    infeasible_set,
    max_iterations,
    unsupported,
    insufficient_data,
    io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every exception thrown by the library. The code lets callers
/// (the CLI in particular) map failures onto exit codes without RTTI games.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what)
        : Error(ErrorCode::invalid_argument, what) {}
};

class InfeasibleSet : public Error {
public:
    explicit InfeasibleSet(const std::string& what)
        : Error(ErrorCode::infeasible_set, what) {}
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& what)
        : Error(ErrorCode::unsupported, what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what)
        : Error(ErrorCode::insufficient_data, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what)
        : Error(ErrorCode::io, what) {}
};

} // namespace ep
