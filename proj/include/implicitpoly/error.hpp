#pragma once

#include <stdexcept>
#include <string>

namespace implicitpoly {

// Failure classes. The CLI maps these onto process exit codes, so every
// library error must carry one.
enum class Errc {
    syntax,            // malformed expression or literal
    unknown_function,
    unbound_variable,
    domain,            // log of non-positive, sqrt of negative, ...
    invalid_argument,  // bad geometry, dimension mismatch, level cap, ...
    no_bracket,        // range interval does not bracket the solution
    rho_violated,      // sign pattern not a single monotone step
    ill_conditioned,   // singular matrix or condition estimate above cap
    degenerate_system, // Jacobian determinant vanishes
    newton_divergence,
    io,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace implicitpoly
