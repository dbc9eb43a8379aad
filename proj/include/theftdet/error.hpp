#pragma once

#include <stdexcept>
#include <string>

namespace theftdet {

/// Process exit codes used by the command-line driver.
enum class ExitCode : int {
    Ok = 0,
    Usage = 1,
    Data = 2,
    Infeasible = 3,
};

/// Base class for every error raised by the library. Each subclass carries
/// the exit code the CLI reports for it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::Data; }
};

/// Invalid configuration or arguments.
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Usage; }
};

/// Bad, missing, or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV input. Carries the 1-based line number (0 when not tied to a line).
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line)
        : DataError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A model cannot be built with the requested parameters (e.g. k too large).
class InfeasibleError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::Infeasible; }
};

} // namespace theftdet
