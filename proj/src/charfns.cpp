#include "stable_psr/charfns.hpp"

#include <cmath>
#include <vector>

#include "stable_psr/errors.hpp"
#include "stable_psr/psr_engine.hpp"
#include "stable_psr/quadrature.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {
namespace {

constexpr double kSeriesCut = 2.0;

void check_nonneg(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and >= 0");
}

// sum_{m>=m0} (-1)^m a w^m / (m! (m-a))
double g_series(double a, double w, int m0) {
    double pw = 1.0, sum = 0.0;
    for (int m = 1; m < m0; ++m) pw *= -w / m;
    for (int m = m0; m < 400; ++m) {
        pw *= -w / m;
        double term = pw * a / (m - a);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum) && m > m0 + 2) break;
    }
    return sum;
}

// e^{i th - r} - 1 - i th, computed without cancellation
std::complex<double> bracket(double th, double r) {
    double em = std::expm1(-r);
    double s = std::sin(th);
    double half = std::sin(0.5 * th);
    double sin_minus = std::fabs(th) < 1e-3 ? -th * th * th / 6.0 * (1.0 - th * th / 20.0) : s - th;
    return {em * std::cos(th) - 2.0 * half * half, em * s + sin_minus};
}

// alpha * int_0^T (e^{i s mu t - sig^2 s^2 t^2/2} - 1 - i s mu t) t^{-alpha-1} dt
std::complex<double> residual_integral(double alpha, const GaussianWParams& w, double s, double lo, double hi) {
    const double mu = w.mu_w, sig = w.sigma_w;
    auto f = [&](double t) {
        return bracket(s * mu * t, 0.5 * sig * sig * s * s * t * t) * std::pow(t, -alpha - 1.0);
    };
    QuadResult re, im;
    if (lo > 0.5 * hi) {
        re = integrate_checked([&](double t) { return f(t).real(); }, lo, hi, 1e-12, 1e-12);
        im = integrate_checked([&](double t) { return f(t).imag(); }, lo, hi, 1e-12, 1e-12);
        return alpha * std::complex<double>(re.value, im.value);
    }
    // t = T v^{1/(2-alpha)} flattens the t^{1-alpha} behaviour at 0
    const double m = 1.0 / (2.0 - alpha);
    auto part = [&](double T) {
        auto g = [&](double v) {
            if (v <= 0.0) return std::complex<double>(0.0, 0.0);
            double t = T * std::pow(v, m);
            return f(t) * (T * m * std::pow(v, m - 1.0));
        };
        auto r = integrate_checked([&](double v) { return g(v).real(); }, 0.0, 1.0, 1e-12, 1e-12);
        auto i = integrate_checked([&](double v) { return g(v).imag(); }, 0.0, 1.0, 1e-12, 1e-12);
        return std::complex<double>(r.value, i.value);
    };
    std::complex<double> v = part(hi);
    if (lo > 0.0) v -= part(lo);
    return alpha * v;
}

}  // namespace

double half_alpha(double alpha) {
    check_alpha(alpha);
    return alpha / 2.0;
}

double eta_of(double alpha) {
    double a = half_alpha(alpha);
    return (1.0 - a) / a;
}

double w_of_s(double alpha, double c, double s) { return eta_of(alpha) * s * s / (2.0 * c); }

double u_of_w(double alpha, double c, double w, const GaussianWParams& wp) {
    PsrConfig cfg{alpha, wp, c, std::nullopt};
    return w * residual_moments(cfg).var;
}

double u_of_s(double alpha, double c, double s, const GaussianWParams& wp) {
    return u_of_w(alpha, c, w_of_s(alpha, c, s), wp);
}

double g_fn(double alpha, double w) {
    double a = half_alpha(alpha);
    check_nonneg(w, "w");
    if (w < kSeriesCut) return g_series(a, w, 1);
    return 1.0 - std::exp(-w) - std::pow(w, a) * lower_inc_gamma(1.0 - a, w);
}

double g_excess(double alpha, double w) {
    double a = half_alpha(alpha);
    check_nonneg(w, "w");
    if (w < kSeriesCut) return g_series(a, w, 2);
    return g_fn(alpha, w) + w / eta_of(alpha);
}

double q_fn(double alpha, double u) {
    double a = half_alpha(alpha);
    check_nonneg(u, "u");
    if (u == 0.0) return 0.0;
    if (u < kSeriesCut) return -std::pow(u, a) * gamma_fn(1.0 - a) - g_series(a, u, 1);
    return -(-std::expm1(-u) + std::exp(a * std::log(u) + log_upper_inc_gamma(1.0 - a, u)));
}

SeriesValue log_cf_Z_series(double alpha, const GaussianWParams& w, double c, double s, int k_max) {
    check_alpha(alpha);
    w.validate();
    if (!(c > 0.0)) throw DomainError("c must be > 0");
    if (k_max < 3) throw DomainError("k_max must be >= 3");
    SeriesValue out{{-0.5 * s * s, 0.0}, 0.0, 2};
    if (s == 0.0) {
        out.value = 0.0;
        return out;
    }
    const double mu = w.mu_w, sig = w.sigma_w;
    const double log_scale = std::log(w.raw_moment(2) * alpha / (2.0 - alpha));
    const double ls = std::log(std::fabs(s)), lc = std::log(c);
    const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    double prev = INFINITY;
    for (int k = 3; k <= k_max; ++k) {
        // E[W^k]/k! as a sum over even Gaussian moments, each term in log space
        double common = -0.5 * k * log_scale + (1.0 - 0.5 * k) * lc + k * ls;
        double coef = 0.0;
        for (int j = 0; j <= k; j += 2) {
            int r = k - j;
            if (r > 0 && mu == 0.0) continue;
            if (j > 0 && sig == 0.0) continue;
            double lt = common - std::lgamma(r + 1.0) - std::lgamma(0.5 * j + 1.0) - 0.5 * j * std::log(2.0);
            if (r > 0) lt += r * std::log(std::fabs(mu));
            if (j > 0) lt += j * std::log(sig);
            double sign = (r % 2 == 1 && mu < 0) ? -1.0 : 1.0;
            if (s < 0 && k % 2 == 1) sign = -sign;
            coef += sign * std::exp(lt);
        }
        coef *= alpha / (k - alpha);
        std::complex<double> term = ipow[k % 4] * coef;
        out.value += term;
        out.k_used = k;
        double mag = std::abs(term);
        out.last_term = mag;
        if (k > 3 && mag + prev < 1e-14 * std::abs(out.value)) break;
        prev = mag;
    }
    return out;
}

std::complex<double> log_cf_R_integral(double alpha, const GaussianWParams& w, double c, std::optional<double> d,
                                       double s) {
    PsrConfig cfg{alpha, w, c, d};
    cfg.validate();
    if (s == 0.0) return {0.0, 0.0};
    const double p = (alpha - 1.0) / alpha;
    const double hi = std::pow(c, -1.0 / alpha);
    const std::complex<double> is(0.0, s);
    if (!d) return residual_integral(alpha, w, s, 0.0, hi) - is * w.mu_w * (alpha / (alpha - 1.0)) * std::pow(c, p);
    const double lo = std::pow(*d, -1.0 / alpha);
    return residual_integral(alpha, w, s, lo, hi) +
           is * w.mu_w * (alpha / (1.0 - alpha)) * (std::pow(c, p) - std::pow(*d, p)) - is * centring_b(cfg);
}

double log_cf_Z_closed(double alpha, double c, double w) { return c * g_fn(alpha, w); }
double log_cf_Z_gauss(double alpha, double c, double w) { return -c * w / eta_of(alpha); }
double log_cf_R_closed(double alpha, double c, double u) { return c * g_fn(alpha, u); }
double log_cf_R_hat(double alpha, double c, double u) { return -c * u / eta_of(alpha); }
double log_cf_X0c_closed(double alpha, double c, double u) { return c * q_fn(alpha, u); }
double log_cf_x_hat(double alpha, double c, double u) {
    return log_cf_X0c_closed(alpha, c, u) + log_cf_R_hat(alpha, c, u);
}
double log_cf_stable_u(double alpha, double c, double u) {
    double a = half_alpha(alpha);
    check_nonneg(u, "u");
    return -c * std::pow(u, a) * gamma_fn(1.0 - a);
}

}  // namespace stable_psr
