#pragma once

#include <stdexcept>
#include <string>

namespace pwl {

// Malformed input text (JSON, DIMACS, history arrays with bad shape).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string &msg) : std::runtime_error(msg) {}
};

// A structural invariant does not hold; the message names the first
// violated invariant (e.g. "non-total behavior", "unknown state").
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

// An identifier (state, action, behavior) is out of range.
class IndexError : public std::out_of_range {
public:
    explicit IndexError(const std::string &msg) : std::out_of_range(msg) {}
};

// An operation required a satisfactory plan and the given one is not.
class NotSatisfactory : public std::runtime_error {
public:
    explicit NotSatisfactory(const std::string &msg) : std::runtime_error(msg) {}
};

// An assignment's restriction to a clause's variables falsifies the clause.
class RestrictionUnsatisfied : public std::runtime_error {
public:
    explicit RestrictionUnsatisfied(const std::string &msg) : std::runtime_error(msg) {}
};

// A brute-force helper was asked to enumerate beyond its hard limit.
class SizeLimit : public std::runtime_error {
public:
    explicit SizeLimit(const std::string &msg) : std::runtime_error(msg) {}
};

// A declared polynomial-size policy cap would be violated.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace pwl
