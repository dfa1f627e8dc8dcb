#pragma once

#include <stdexcept>
#include <string>

namespace paq {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class MassExceedsOne : public Error {
public:
    explicit MassExceedsOne(const std::string& what = "total mass exceeds 1") : Error(what) {}
};

class DuplicateState : public Error {
public:
    explicit DuplicateState(const std::string& what = "duplicate state") : Error(what) {}
};

class NotInSupport : public Error {
public:
    explicit NotInSupport(const std::string& what = "state not in support") : Error(what) {}
};

class UncoveredState : public Error {
public:
    explicit UncoveredState(const std::string& what = "state not covered by partition") : Error(what) {}
};

class ActionMismatch : public Error {
public:
    explicit ActionMismatch(const std::string& what = "action sets differ") : Error(what) {}
};

class CoverMismatch : public Error {
public:
    explicit CoverMismatch(const std::string& what = "partition does not cover the state set") : Error(what) {}
};

class NotBisimilar : public Error {
public:
    explicit NotBisimilar(const std::string& what = "automata are not bisimilar") : Error(what) {}
};

class NotQuotient : public Error {
public:
    explicit NotQuotient(const std::string& what = "automaton is not a quotient") : Error(what) {}
};

class NotRescaled : public Error {
public:
    explicit NotRescaled(const std::string& what = "automaton is not rescaled") : Error(what) {}
};

/// Internal consistency failure: a meet of valid bisimilar quotients came out
/// non-bisimilar. Unreachable for finite rational inputs; kept to document the
/// failure mode that non-finite inputs would exhibit.
class MeetNotBisimilar : public Error {
public:
    explicit MeetNotBisimilar(const std::string& what = "meet is not bisimilar to its arguments") : Error(what) {}
};

class InvalidQuotientSet : public Error {
public:
    explicit InvalidQuotientSet(const std::string& what = "invalid quotient set") : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what = "vector dimensions differ") : Error(what) {}
};

/// Parse-time error, carries 1-based line (and column where known).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int col = 0)
        : Error(what + " (line " + std::to_string(line) +
                (col > 0 ? ", col " + std::to_string(col) : "") + ")"),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

class SyntaxError : public ParseError {
public:
    SyntaxError(const std::string& what, int line, int col = 0) : ParseError(what, line, col) {}
};

class MassNotOne : public ParseError {
public:
    MassNotOne(const std::string& what, int line) : ParseError(what, line) {}
};

class UnknownState : public ParseError {
public:
    UnknownState(const std::string& what, int line) : ParseError(what, line) {}
};

class UnknownAction : public ParseError {
public:
    UnknownAction(const std::string& what, int line) : ParseError(what, line) {}
};

class IrrationalLiteral : public ParseError {
public:
    IrrationalLiteral(const std::string& what, int line, int col = 0) : ParseError(what, line, col) {}
};

} // namespace paq
