#include "stable_psr/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stable_psr/errors.hpp"

namespace stable_psr {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

bool nonpositive_integer(double s) { return s <= 0.0 && std::floor(s) == s; }

void check_args(double s, double x) {
    if (!std::isfinite(s) || !std::isfinite(x)) throw DomainError("incomplete gamma: non-finite argument");
    if (x < 0.0) throw DomainError("incomplete gamma: x must be >= 0");
    if (nonpositive_integer(s)) throw DomainError("incomplete gamma: s must not be a non-positive integer");
}

// sum_{n>=0} x^n / ((s+1)...(s+n)), so that gamma(s,x) = x^s e^{-x} / s * sum
double lower_series(double s, double x) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) return sum;
    }
    throw ConvergenceError("incomplete gamma series did not converge", std::fabs(term / sum));
}

// Modified Lentz for Gamma(s,x) = x^s e^{-x} * cf
double upper_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge", 0.0);
}

double checked(double v, const char* what) {
    if (std::isnan(v)) throw std::runtime_error(std::string(what) + ": NaN result");
    if (std::isinf(v)) throw std::overflow_error(std::string(what) + ": overflow");
    return v;
}

}  // namespace

void check_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 2.0)
        throw DomainError("alpha must lie in (0,2)");
    if (std::fabs(alpha - 1.0) <= 1e-6) throw DomainError("alpha = 1 is excluded");
}

double gamma_fn(double s) {
    if (!std::isfinite(s) || nonpositive_integer(s)) throw DomainError("gamma: invalid argument");
    return checked(std::tgamma(s), "gamma");
}

double lower_inc_gamma(double s, double x) {
    check_args(s, x);
    if (x == 0.0) {
        if (s > 0.0) return 0.0;
        throw DomainError("lower incomplete gamma: x = 0 with s <= 0");
    }
    if (s < 0.0 || x < s + 1.0)
        return checked(std::exp(s * std::log(x) - x) / s * lower_series(s, x), "lower_inc_gamma");
    return checked(gamma_fn(s) - std::exp(s * std::log(x) - x) * upper_cf(s, x), "lower_inc_gamma");
}

double log_upper_inc_gamma(double s, double x) {
    check_args(s, x);
    if (x == 0.0) {
        if (s > 0.0) return std::lgamma(s);
        throw DomainError("upper incomplete gamma: x = 0 with s <= 0");
    }
    if (x >= s + 1.0) return s * std::log(x) - x + std::log(upper_cf(s, x));
    if (s > 0.0) {
        // Gamma(s)(1 - P) with P the regularised lower part
        double logp = s * std::log(x) - x - std::lgamma(s + 1.0) + std::log(lower_series(s, x));
        return std::lgamma(s) + std::log1p(-std::exp(logp));
    }
    // negative non-integer s with small x: recur down from s + n > 0
    int n = static_cast<int>(std::floor(-s)) + 1;
    double v = std::exp(log_upper_inc_gamma(s + n, x));
    for (int k = n - 1; k >= 0; --k) {
        double sk = s + k;
        v = (v - std::exp(sk * std::log(x) - x)) / sk;
    }
    if (!(v > 0.0)) throw std::runtime_error("upper incomplete gamma: lost precision for negative s");
    return std::log(v);
}

double upper_inc_gamma(double s, double x) {
    return checked(std::exp(log_upper_inc_gamma(s, x)), "upper_inc_gamma");
}

double c_alpha_const(double alpha) {
    check_alpha(alpha);
    return (1.0 - alpha) / (gamma_fn(2.0 - alpha) * std::cos(std::numbers::pi * alpha / 2.0));
}

}  // namespace stable_psr
