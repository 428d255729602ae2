#include "stable_psr/psr_engine.hpp"

#include <algorithm>
#include <cmath>

#include "stable_psr/errors.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {
namespace {

// int_lo^hi t^{-k/alpha} dt
double power_integral(double alpha, double k, double lo, double hi) {
    double e = 1.0 - k / alpha;
    if (std::fabs(e) < 1e-12) return std::log(hi / lo);
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

struct BandSums {
    double a = 0.0;  // sum t^{-1/alpha}
    double v = 0.0;  // sum t^{-2/alpha}
};

BandSums exact_band(double alpha, double lo, double hi, Rng& rng) {
    BandSums out;
    std::poisson_distribution<long long> pois(hi - lo);
    std::uniform_real_distribution<double> uni(lo, hi);
    long long n = hi > lo ? pois(rng) : 0;
    const double p = -1.0 / alpha;
    for (long long j = 0; j < n; ++j) {
        double t = std::pow(uni(rng), p);
        out.a += t;
        out.v += t * t;
    }
    return out;
}

// Gaussian surrogate for a very long band, with the exact first two moments
BandSums normal_band(double alpha, double lo, double hi, Rng& rng) {
    std::normal_distribution<double> nd;
    double ma = power_integral(alpha, 1, lo, hi);
    double mv = power_integral(alpha, 2, lo, hi);
    double vv = power_integral(alpha, 4, lo, hi);
    double cov = power_integral(alpha, 3, lo, hi);
    double va = mv;
    double sa = std::sqrt(va);
    double z1 = nd(rng), z2 = nd(rng);
    BandSums out;
    out.a = ma + sa * z1;
    double resid = std::max(vv - cov * cov / va, 0.0);
    out.v = std::max(mv + cov / sa * z1 + std::sqrt(resid) * z2, 0.0);
    return out;
}

double exact_limit(double c, double d) { return std::min(d, 4.0 * c + 256.0); }

}  // namespace

void PsrConfig::validate() const {
    check_alpha(alpha);
    w.validate();
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be > 0");
    if (d && !(*d > c)) throw DomainError("d must exceed c");
}

double b_constants_sum(double alpha, long long n) {
    check_alpha(alpha);
    if (n < 1) throw DomainError("n must be >= 1");
    if (alpha < 1.0) return 0.0;
    return alpha / (alpha - 1.0) * std::pow(static_cast<double>(n), (alpha - 1.0) / alpha);
}

double centring_b(const PsrConfig& cfg) {
    if (cfg.alpha < 1.0 || !cfg.d) return 0.0;
    return cfg.w.mu_w * cfg.alpha / (cfg.alpha - 1.0) * std::pow(*cfg.d, (cfg.alpha - 1.0) / cfg.alpha);
}

ResidualMoments residual_moments(const PsrConfig& cfg) {
    cfg.validate();
    const double a = cfg.alpha, c = cfg.c;
    const double ew = cfg.w.mu_w, ew2 = cfg.w.raw_moment(2);
    const double p1 = (a - 1.0) / a, p2 = (a - 2.0) / a;
    if (!cfg.d) return {ew * a / (1.0 - a) * std::pow(c, p1), ew2 * a / (2.0 - a) * std::pow(c, p2)};
    const double d = *cfg.d;
    double mean = ew * a / (a - 1.0) * (std::pow(d, p1) - std::pow(c, p1)) - centring_b(cfg);
    double var = ew2 * a / (a - 2.0) * (std::pow(d, p2) - std::pow(c, p2));
    return {mean, var};
}

double default_far_truncation(double c) { return std::max(1e6, c * 1e4); }

std::vector<double> poisson_arrivals(double c, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(c + 4.0 * std::sqrt(c) + 8.0));
    double t = expo(rng);
    while (t <= c) {
        g.push_back(t);
        t += expo(rng);
    }
    return g;
}

PsrDraw sample_truncated(const PsrConfig& cfg, Rng& rng) {
    cfg.validate();
    PsrDraw out;
    out.gammas = poisson_arrivals(cfg.c, rng);
    std::normal_distribution<double> wdist(cfg.w.mu_w, cfg.w.sigma_w);
    out.ws.resize(out.gammas.size());
    double sa = 0.0, sv = 0.0;
    for (std::size_t j = 0; j < out.gammas.size(); ++j) {
        double t = std::pow(out.gammas[j], -1.0 / cfg.alpha);
        out.ws[j] = cfg.w.sigma_w > 0 ? wdist(rng) : cfg.w.mu_w;
        out.x0c += out.ws[j] * t;
        sa += t;
        sv += t * t;
    }
    out.m0c = cfg.w.mu_w * sa;
    out.s0c_sq = cfg.w.sigma_w * cfg.w.sigma_w * sv;
    return out;
}

double sample_x_hat(const PsrConfig& cfg, Rng& rng) {
    if (cfg.d) throw DomainError("sample_x_hat uses the infinite residual; d must be absent");
    PsrDraw draw = sample_truncated(cfg, rng);
    ResidualMoments rm = residual_moments(cfg);
    std::normal_distribution<double> nd;
    return draw.x0c + rm.mean + std::sqrt(rm.var) * nd(rng);
}

double sample_residual(const PsrConfig& cfg, Rng& rng) {
    cfg.validate();
    if (!cfg.d) throw DomainError("sample_residual needs d");
    const double c = cfg.c, d = *cfg.d, lim = exact_limit(c, d);
    BandSums near = exact_band(cfg.alpha, c, lim, rng);
    if (lim < d) {
        BandSums far = normal_band(cfg.alpha, lim, d, rng);
        near.a += far.a;
        near.v += far.v;
    }
    std::normal_distribution<double> nd;
    double z = nd(rng);
    return cfg.w.mu_w * near.a + cfg.w.sigma_w * std::sqrt(near.v) * z - centring_b(cfg);
}

std::vector<double> sample_x0c_n(const PsrConfig& cfg, Rng& rng, std::size_t n) {
    cfg.validate();
    std::vector<double> out(n);
    std::normal_distribution<double> nd;
    std::exponential_distribution<double> expo(1.0);
    const double p = -1.0 / cfg.alpha;
    for (auto& x : out) {
        double sa = 0.0, sv = 0.0;
        for (double t = expo(rng); t <= cfg.c; t += expo(rng)) {
            double y = std::pow(t, p);
            sa += y;
            sv += y * y;
        }
        x = cfg.w.mu_w * sa + cfg.w.sigma_w * std::sqrt(sv) * nd(rng);
    }
    return out;
}

std::vector<double> sample_x_hat_n(const PsrConfig& cfg, Rng& rng, std::size_t n) {
    if (cfg.d) throw DomainError("sample_x_hat uses the infinite residual; d must be absent");
    std::vector<double> out = sample_x0c_n(cfg, rng, n);
    ResidualMoments rm = residual_moments(cfg);
    std::normal_distribution<double> nd(rm.mean, std::sqrt(rm.var));
    for (auto& x : out) x += nd(rng);
    return out;
}

std::vector<double> sample_residual_n(const PsrConfig& cfg, Rng& rng, std::size_t n) {
    cfg.validate();
    if (!cfg.d) throw DomainError("sample_residual needs d");
    Rng mix(rng());
    std::normal_distribution<double> nd;
    const double c = cfg.c, d = *cfg.d, lim = exact_limit(c, d), b = centring_b(cfg);
    std::vector<double> out(n);
    for (auto& x : out) {
        BandSums s = exact_band(cfg.alpha, c, lim, rng);
        if (lim < d) {
            BandSums far = normal_band(cfg.alpha, lim, d, rng);
            s.a += far.a;
            s.v += far.v;
        }
        x = cfg.w.mu_w * s.a + cfg.w.sigma_w * std::sqrt(s.v) * nd(mix) - b;
    }
    return out;
}

double psr_partial_sum(double alpha, const std::vector<double>& gammas, const std::vector<double>& ws,
                       double lo, double hi) {
    double s = 0.0;
    for (std::size_t j = 0; j < gammas.size(); ++j)
        if (gammas[j] > lo && gammas[j] <= hi) s += ws[j] * std::pow(gammas[j], -1.0 / alpha);
    return s;
}

}  // namespace stable_psr
