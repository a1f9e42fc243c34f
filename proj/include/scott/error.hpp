#pragma once

#include <stdexcept>
#include <string>

namespace scott {

// Domain error: malformed input, arity mismatch, precondition violation.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A search or enumeration ran past its explicit resource cap.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Text parse failure, with a byte offset into the input.
struct parse_error : domain_error {
    parse_error(std::size_t position, const std::string& msg)
        : domain_error(msg + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

} // namespace scott
