#ifndef GTS_ERRORS_HPP
#define GTS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gts {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Graph construction rejected the input.
class GraphBuildError : public Error {
public:
    enum class Kind { DanglingEdgeRef, DuplicateId };

    GraphBuildError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// A rule's left- and right-hand sides disagree on a shared element.
class RuleError : public Error {
public:
    using Error::Error;
};

/// Malformed source text; carries the 1-based location of the offence.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A form has the wrong number or shape of arguments.
class ArityError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A name does not resolve against the loaded system.
class ResolveError : public Error {
public:
    using Error::Error;
};

class UnknownOrderError : public ResolveError {
public:
    explicit UnknownOrderError(const std::string& name)
        : ResolveError("unknown graph order: " + name) {}
};

class UnknownGrapeError : public ResolveError {
public:
    explicit UnknownGrapeError(const std::string& name)
        : ResolveError("unknown grape: " + name) {}
};

/// apply() was handed a morphism that is not a valid match.
class InvalidMatchError : public Error {
public:
    using Error::Error;
};

/// A loop or search exceeded the configured iteration cap.
class DivergenceError : public Error {
public:
    explicit DivergenceError(std::size_t cap)
        : Error("iteration cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}

    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

/// Store-level failure: unknown id, snapshot i/o, corrupt snapshot.
class StoreError : public Error {
public:
    using Error::Error;
};

} // namespace gts

#endif // GTS_ERRORS_HPP
