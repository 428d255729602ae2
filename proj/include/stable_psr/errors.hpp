#pragma once

#include <stdexcept>
#include <string>

namespace stable_psr {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Quadrature or iteration ran out of budget; carries what it got to.
struct ConvergenceError : std::runtime_error {
    double achieved;
    ConvergenceError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved(achieved_tol) {}
};

struct UnreachableTolerance : std::runtime_error {
    double best_c;
    double best_bound;
    UnreachableTolerance(const std::string& what, double c, double bound)
        : std::runtime_error(what), best_c(c), best_bound(bound) {}
};

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stable_psr
