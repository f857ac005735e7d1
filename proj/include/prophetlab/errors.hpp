#pragma once
#include <stdexcept>
#include <string>

namespace prophetlab {

// Error taxonomy used across the toolkit.  The CLI maps each kind to a
// machine-readable error record and a distinct exit code.

struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A desk-scale limit was exceeded (subset DP size, merged grid size, ...).
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation's stated precondition does not hold for the given input.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A request cannot be answered at the configured grid resolution.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace prophetlab
