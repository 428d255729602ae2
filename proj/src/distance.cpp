#include "stable_psr/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stable_psr/charfns.hpp"
#include "stable_psr/errors.hpp"
#include "stable_psr/quadrature.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {
namespace {

using std::numbers::pi;

bool in_w(CfKind k) { return k == CfKind::Z || k == CfKind::Gauss; }

// l_S - l_T for the pairs where the difference has a cancellation-free form
bool special_gap(CfKind s, CfKind t, double alpha, double c, double v, double& out) {
    auto is = [&](CfKind x, CfKind y) { return s == x && t == y; };
    if (is(CfKind::Z, CfKind::Gauss) || is(CfKind::X, CfKind::XHat)) {
        out = c * g_excess(alpha, v);
        return true;
    }
    if (is(CfKind::X, CfKind::X0c)) {
        out = c * g_fn(alpha, v);
        return true;
    }
    if (is(CfKind::XHat, CfKind::X0c)) {
        out = log_cf_R_hat(alpha, c, v);
        return true;
    }
    return false;
}

}  // namespace

CfKind parse_cf_kind(const std::string& name) {
    if (name == "z") return CfKind::Z;
    if (name == "gauss") return CfKind::Gauss;
    if (name == "x") return CfKind::X;
    if (name == "xhat") return CfKind::XHat;
    if (name == "x0c") return CfKind::X0c;
    throw DomainError("unknown CF kind: " + name);
}

std::string cf_kind_name(CfKind k) {
    switch (k) {
        case CfKind::Z: return "z";
        case CfKind::Gauss: return "gauss";
        case CfKind::X: return "x";
        case CfKind::XHat: return "xhat";
        case CfKind::X0c: return "x0c";
    }
    return "?";
}

CfPair parse_cf_pair(const std::string& name) {
    if (name == "z") return {CfKind::Z, CfKind::Gauss};
    if (name == "xhat") return {CfKind::X, CfKind::XHat};
    if (name == "x0c") return {CfKind::X, CfKind::X0c};
    auto colon = name.find(':');
    if (colon == std::string::npos) throw DomainError("unknown CF pair: " + name);
    CfPair p{parse_cf_kind(name.substr(0, colon)), parse_cf_kind(name.substr(colon + 1))};
    if (in_w(p.first) != in_w(p.second)) throw DomainError("CF pair mixes w- and u-variable laws: " + name);
    return p;
}

double log_cf_native(CfKind k, double alpha, double c, double v) {
    switch (k) {
        case CfKind::Z: return log_cf_Z_closed(alpha, c, v);
        case CfKind::Gauss: return log_cf_Z_gauss(alpha, c, v);
        case CfKind::X: return log_cf_stable_u(alpha, c, v);
        case CfKind::XHat: return log_cf_x_hat(alpha, c, v);
        case CfKind::X0c: return log_cf_X0c_closed(alpha, c, v);
    }
    throw DomainError("bad CF kind");
}

double cf_pair_gap(const CfPair& pair, double alpha, double c, double v) {
    if (pair.first == pair.second || v == 0.0) return 0.0;
    double diff;
    CfKind base = pair.second;
    if (!special_gap(pair.first, pair.second, alpha, c, v, diff)) {
        if (special_gap(pair.second, pair.first, alpha, c, v, diff)) {
            base = pair.first;
        } else {
            diff = log_cf_native(pair.first, alpha, c, v) - log_cf_native(pair.second, alpha, c, v);
        }
    }
    // |e^{lb} - e^{lb + diff}| = e^{max} (1 - e^{-|diff|}); avoids inf * 0.
    // The larger log is taken from its own closed form: lb + diff cancels
    // badly once diff ~ c u / eta is huge.
    CfKind other = base == pair.second ? pair.first : pair.second;
    double hi = log_cf_native(diff > 0.0 ? other : base, alpha, c, v);
    return std::exp(hi) * -std::expm1(-std::fabs(diff));
}

double tail_truncation(const std::function<double(double)>& integrand, double start, double threshold) {
    double x = start;
    for (int i = 0; i < 4000; ++i) {
        if (integrand(x) < threshold && integrand(2.0 * x) < threshold) return x;
        x *= 2.0;
    }
    throw ConvergenceError("tail truncation: integrand never fell below threshold", integrand(x));
}

double tail_truncation(const CfPair& pair, double alpha, double c) {
    return tail_truncation([&](double v) { return cf_pair_gap(pair, alpha, c, v) / (pi * v); });
}

EsseenEstimate esseen_bound(const CfPair& pair, double alpha, double c, double theta, double density_bound_m) {
    check_alpha(alpha);
    if (!(c > 0.0)) throw DomainError("c must be > 0");
    if (!(theta > 0.0)) throw DomainError("theta must be > 0");
    EsseenEstimate est;
    est.pair = cf_kind_name(pair.first) + ":" + cf_kind_name(pair.second);
    est.theta = theta;
    bool finite = std::isfinite(theta);
    if (finite && !(pair.first == CfKind::Z && pair.second == CfKind::Gauss) &&
        !(pair.first == CfKind::Gauss && pair.second == CfKind::Z) && pair.first != pair.second)
        throw DomainError("finite theta needs a density bound; only the Z vs Gauss pair has one");
    if (pair.first == pair.second) {
        if (finite) est.value = 24.0 * density_bound_m / (pi * theta);
        return est;
    }
    if (finite && !in_w(pair.first)) throw DomainError("finite theta is only defined for the w-variable pair");

    auto gap = [&](double v) { return cf_pair_gap(pair, alpha, c, v); };
    double upper = finite ? eta_of(alpha) * theta * theta / (2.0 * c) : tail_truncation(pair, alpha, c);
    // lower end: halve until the gap itself is negligible, then patch the
    // remaining power-law piece analytically
    double lower = std::min(1e-6, 0.5 * upper);
    for (int i = 0; i < 400 && (gap(lower) >= 1e-14 || gap(0.5 * lower) >= 1e-14); ++i) lower *= 0.5;
    double patch = 0.0;
    double g0 = gap(lower), g1 = gap(0.5 * lower);
    if (g0 > 0.0 && g1 > 0.0) {
        double p = std::log(g0 / g1) / std::log(2.0);
        if (p > 0.0) patch = g0 / p;
    }
    auto f = [&](double t) { return gap(std::exp(t)); };
    QuadResult r = integrate_gk15(f, std::log(lower), std::log(upper), 1e-10, 1e-10, 10000);
    if (!r.converged && r.abs_err >= 1e-8)
        throw ConvergenceError("Esseen integral did not converge", r.abs_err / pi);
    est.value = (r.value + patch) / pi;
    est.abs_err = (r.abs_err + patch) / pi;
    est.lower = lower;
    est.upper = upper;
    est.intervals = r.intervals;
    if (finite) est.value += 24.0 * density_bound_m / (pi * theta);
    return est;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_one_sample: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

}  // namespace stable_psr
