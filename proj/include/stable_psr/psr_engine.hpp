#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stable_psr/stable_core.hpp"

namespace stable_psr {

struct PsrConfig {
    double alpha = 1.5;
    GaussianWParams w;
    double c = 10.0;
    std::optional<double> d;
    void validate() const;
};

struct PsrDraw {
    std::vector<double> gammas;
    std::vector<double> ws;
    double x0c = 0.0;
    double m0c = 0.0;
    double s0c_sq = 0.0;
};

struct ResidualMoments {
    double mean;
    double var;
};

double b_constants_sum(double alpha, long long n);

// centring constant B for the residual on (c, d]
double centring_b(const PsrConfig& cfg);

ResidualMoments residual_moments(const PsrConfig& cfg);

// Far truncation used when an "infinite" residual has to be drawn.
double default_far_truncation(double c);

std::vector<double> poisson_arrivals(double c, Rng& rng);
PsrDraw sample_truncated(const PsrConfig& cfg, Rng& rng);
double sample_x_hat(const PsrConfig& cfg, Rng& rng);
double sample_residual(const PsrConfig& cfg, Rng& rng);

// Batched draws. These use the exact Gaussian law of sum W_j t_j given the
// arrivals instead of drawing each W_j.
std::vector<double> sample_x0c_n(const PsrConfig& cfg, Rng& rng, std::size_t n);
std::vector<double> sample_x_hat_n(const PsrConfig& cfg, Rng& rng, std::size_t n);
// Arrivals come from one stream and the Gaussian mixing draws from a second
// one seeded off rng, so two calls with equal seeds share the Gaussian part.
std::vector<double> sample_residual_n(const PsrConfig& cfg, Rng& rng, std::size_t n);

// sum of W_j Gamma_j^{-1/alpha} over lo < Gamma_j <= hi
double psr_partial_sum(double alpha, const std::vector<double>& gammas, const std::vector<double>& ws,
                       double lo, double hi);

}  // namespace stable_psr
