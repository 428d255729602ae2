#include "stable_psr/stable_core.hpp"

#include <cmath>
#include <numbers>

#include "stable_psr/errors.hpp"
#include "stable_psr/quadrature.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {

using std::numbers::pi;

void StableParams::validate() const {
    check_alpha(alpha);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be > 0");
    if (!(std::fabs(beta) <= 1.0)) throw DomainError("beta must lie in [-1,1]");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
}

void GaussianWParams::validate() const {
    if (!std::isfinite(mu_w) || !std::isfinite(sigma_w)) throw DomainError("W parameters must be finite");
    if (sigma_w < 0.0) throw DomainError("sigma_w must be >= 0");
    if (sigma_w == 0.0 && mu_w == 0.0) throw DomainError("W cannot be degenerate at 0");
}

double GaussianWParams::raw_moment(int k) const {
    // E[(mu + sigma Z)^k] = sum_j C(k,j) mu^{k-j} sigma^j E[Z^j], E[Z^j] = (j-1)!! for even j
    double total = 0.0, binom = 1.0, zmom = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * (k - j + 1) / j;
        if (j % 2 == 0) {
            if (j >= 2) zmom *= (j - 1);
            total += binom * std::pow(mu_w, k - j) * std::pow(sigma_w, j) * zmom;
        }
    }
    return total;
}

std::complex<double> stable_log_cf(const StableParams& p, double s) {
    p.validate();
    if (s == 0.0) return {0.0, 0.0};
    double scale = std::pow(p.sigma * std::fabs(s), p.alpha);
    double sgn = s > 0 ? 1.0 : -1.0;
    double t = std::tan(pi * p.alpha / 2.0);
    return {-scale, scale * p.beta * sgn * t + p.mu * s};
}

AbsMoments gaussian_abs_moments(double p, const GaussianWParams& w) {
    w.validate();
    if (w.sigma_w == 0.0) {
        double m = std::pow(std::fabs(w.mu_w), p);
        return {m, w.mu_w > 0 ? m : -m};
    }
    // integrate over the standard normal variable z, split at the kink z0
    const double lim = 40.0;
    double z0 = -w.mu_w / w.sigma_w;
    auto dens = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi); };
    auto pos = [&](double z) { return std::pow(std::fabs(w.mu_w + w.sigma_w * z), p) * dens(z); };
    double lo = 0.0, hi = 0.0;
    if (z0 <= -lim) {
        hi = integrate_checked(pos, -lim, lim, 1e-13, 1e-10).value;
    } else if (z0 >= lim) {
        lo = integrate_checked(pos, -lim, lim, 1e-13, 1e-10).value;
    } else {
        lo = integrate_checked(pos, -lim, z0, 1e-13, 1e-10).value;
        hi = integrate_checked(pos, z0, lim, 1e-13, 1e-10).value;
    }
    return {lo + hi, hi - lo};
}

StableParams map_w_to_stable(double alpha, const GaussianWParams& w) {
    check_alpha(alpha);
    AbsMoments m = gaussian_abs_moments(alpha, w);
    StableParams out;
    out.alpha = alpha;
    out.sigma = std::pow(m.abs / c_alpha_const(alpha), 1.0 / alpha);
    out.beta = w.mu_w == 0.0 ? 0.0 : m.signed_ / m.abs;
    out.mu = 0.0;
    return out;
}

double cms_draw(const StableParams& p, Rng& rng) {
    std::uniform_real_distribution<double> uni(-pi / 2.0, pi / 2.0);
    std::exponential_distribution<double> expo(1.0);
    const double a = p.alpha;
    const double zeta = p.beta * std::tan(pi * a / 2.0);
    const double b = std::atan(zeta) / a;
    const double s = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * a));
    double v = uni(rng);
    double e = expo(rng);
    double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
               std::pow(std::cos(v - a * (v + b)) / e, (1.0 - a) / a);
    return p.sigma * x + p.mu;
}

std::vector<double> cms_sample(const StableParams& p, Rng& rng, std::size_t n) {
    p.validate();
    std::vector<double> out(n);
    for (auto& v : out) v = cms_draw(p, rng);
    return out;
}

}  // namespace stable_psr
