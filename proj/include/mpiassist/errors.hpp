#pragma once

#include <stdexcept>
#include <string>

namespace mpiassist {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EncodingError : public Error {
public:
    EncodingError(std::size_t offset, const std::string& what)
        : Error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& what)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// An MPI call used as a subexpression (or as an unbraced control-flow body),
// which cannot be removed without changing the surrounding code.
class EmbeddedCallError : public Error {
public:
    EmbeddedCallError(std::string name, int line)
        : Error("MPI call " + name + " on line " + std::to_string(line) + " is not a standalone statement"),
          name_(std::move(name)), line_(line) {}
    const std::string& name() const { return name_; }
    int line() const { return line_; }

private:
    std::string name_;
    int line_;
};

class NoMainError : public Error {
public:
    NoMainError() : Error("no definition of main") {}
};

class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateIdError : public Error {
public:
    DuplicateIdError(std::string id, std::size_t line)
        : Error("line " + std::to_string(line) + ": duplicate id " + id), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class MissingPredictionError : public Error {
public:
    explicit MissingPredictionError(std::string id)
        : Error("no prediction for example " + id), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class HttpError : public Error {
public:
    HttpError(int status, std::string body)
        : Error("HTTP " + std::to_string(status) + ": " + body), status_(status), body_(std::move(body)) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

class RateLimitedError : public Error {
public:
    explicit RateLimitedError(int retry_after_s)
        : Error("rate limited, retry after " + std::to_string(retry_after_s) + " s"),
          retry_after_(retry_after_s) {}
    int retry_after() const { return retry_after_; }

private:
    int retry_after_;
};

class CompileError : public Error {
public:
    explicit CompileError(std::string diagnostics)
        : Error("compilation failed:\n" + diagnostics), diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const { return diagnostics_; }

private:
    std::string diagnostics_;
};

class RunError : public Error {
public:
    RunError(int exit_code, std::string output)
        : Error("program exited with status " + std::to_string(exit_code)),
          exit_code_(exit_code), output_(std::move(output)) {}
    int exit_code() const { return exit_code_; }
    const std::string& output() const { return output_; }

private:
    int exit_code_;
    std::string output_;
};

class TimeoutError : public Error {
public:
    explicit TimeoutError(int seconds)
        : Error("timed out after " + std::to_string(seconds) + " s") {}
};

} // namespace mpiassist
