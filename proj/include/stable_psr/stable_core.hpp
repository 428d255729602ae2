#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace stable_psr {

using Rng = std::mt19937_64;

struct StableParams {
    double alpha = 1.5;
    double sigma = 1.0;
    double beta = 0.0;
    double mu = 0.0;
    void validate() const;
};

struct GaussianWParams {
    double mu_w = 0.0;
    double sigma_w = 1.0;
    void validate() const;
    double raw_moment(int k) const;  // E[W^k]
};

std::complex<double> stable_log_cf(const StableParams& p, double s);

// E|W|^p and E[|W|^p sign W] for W ~ N(mu, sigma^2)
struct AbsMoments {
    double abs;
    double signed_;
};
AbsMoments gaussian_abs_moments(double p, const GaussianWParams& w);

StableParams map_w_to_stable(double alpha, const GaussianWParams& w);

double cms_draw(const StableParams& p, Rng& rng);
std::vector<double> cms_sample(const StableParams& p, Rng& rng, std::size_t n);

}  // namespace stable_psr
