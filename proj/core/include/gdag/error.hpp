#pragma once

#include <stdexcept>
#include <string>

namespace gdag {

/// Malformed input text (JSON syntax, wrong field types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that parses but violates a structural invariant (cycle, dangling edge, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A node id that is not part of the graph or distribution at hand.
class UnknownNodeError : public std::invalid_argument {
public:
    explicit UnknownNodeError(const std::string& id)
        : std::invalid_argument("unknown node '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// Arguments that violate an operation's precondition (overlapping sets,
/// transformation not applicable, ...). The message names the failed clause.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace gdag
