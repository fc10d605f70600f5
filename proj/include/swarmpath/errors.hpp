#pragma once

#include <stdexcept>
#include <string>

namespace swarmpath {

/// Malformed input document (bad JSON, missing keys, wrong types).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid input that violates a scenario invariant.
/// `field()` names the offending field path, e.g. "arena.goal".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Goal unreachable on the planning grid.
class NoPathError : public std::runtime_error {
public:
    explicit NoPathError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swarmpath
