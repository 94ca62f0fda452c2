#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

/// Thrown when a kernel violates the stability condition ||Phi||_1 < 1.
class stability_error : public std::runtime_error {
public:
    explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical procedure produces non-finite values or an
/// internal consistency check between two computation routes fails.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a simulation method does not support the given kernel shape.
class unsupported_kernel_error : public std::invalid_argument {
public:
    explicit unsupported_kernel_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace hawkes
