#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace supplyrank {

/// Broad failure classes. The CLI maps each class onto a distinct exit code.
enum class ErrorKind {
    parse,        // malformed input document
    validation,   // well-formed but violates a data contract
    not_found,    // unknown node id, missing file referenced by a query
    domain,       // input outside an operation's domain (empty graph, empty history)
    divergence,   // iterative solver failed to converge
    network,      // transport failure
    io,           // filesystem failure
    environment,  // missing external tool
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, double residual, int iterations)
        : Error(ErrorKind::divergence, message), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

} // namespace supplyrank
