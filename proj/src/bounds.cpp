#include "stable_psr/bounds.hpp"

#include <cmath>
#include <numbers>

#include "stable_psr/errors.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {
namespace {

const double kInvE = std::exp(-1.0);

void check_c(double c) {
    if (!(c > 1.0) || !std::isfinite(c)) throw DomainError("c must be finite and > 1");
}

// log of int_1^inf w exp(k - l w^a) dw = e^k Gamma(2/a, l) / (a l^{2/a})
double log_tail_term(double k, double l, double a) {
    return k + log_upper_inc_gamma(2.0 / a, l) - std::log(a) - (2.0 / a) * std::log(l);
}

}  // namespace

BoundConstants bound_constants(double alpha) {
    check_alpha(alpha);
    BoundConstants k;
    k.alpha = alpha;
    k.a = alpha / 2.0;
    k.eta = (1.0 - k.a) / k.a;
    k.g_bar = g_fn(alpha, 1.0);
    k.gamma_bar = lower_inc_gamma(1.0 - k.a, 1.0);
    k.K = (k.a / (2.0 * (2.0 - k.a)) + 1.0 / (k.eta * k.eta)) / std::numbers::pi;
    return k;
}

double h_fn(double alpha, double w) {
    BoundConstants k = bound_constants(alpha);
    if (!(w >= 0.0)) throw DomainError("w must be >= 0");
    if (w <= 1.0) return -k.g_bar * w;
    return kInvE - 1.0 + k.gamma_bar * std::pow(w, k.a);
}

BoundReport bound_b1(double alpha, double c) {
    check_c(c);
    BoundConstants k = bound_constants(alpha);
    const double b = (c - 1.0) * k.g_bar;
    double iz = 1.0 / (b * b) + (1.0 / b) * (1.0 - 1.0 / b) * std::exp(b);
    double l = (c - 1.0) * k.gamma_bar;
    double log_jz = log_tail_term((1.0 - kInvE) * (c - 1.0), l, k.a);
    double jz = std::exp(log_jz);
    BoundReport r{"B1", c * k.K * (iz + jz), {}};
    r.terms = {{"I", iz}, {"J", jz}, {"log_J", log_jz}, {"K", k.K}, {"g_bar", k.g_bar}, {"gamma_bar", k.gamma_bar}};
    return r;
}

BoundReport bound_b2(double alpha, double c, double delta) {
    check_c(c);
    if (!(delta > 0.0 && delta < 2.0)) throw DomainError("delta must lie in (0,2)");
    BoundConstants k = bound_constants(alpha);
    double G = g_fn(alpha, 2.0 - delta);
    double x = G * (c - 1.0);
    double ratio = c * (2.0 - delta) / ((c - 1.0) * G);
    double brace = -std::expm1(x) + x * std::exp(x);
    double b3 = k.K / c * ratio * ratio * brace;
    double lead = 9.6 * std::sqrt(k.eta) / (std::numbers::pi * std::sqrt(2.0 * (2.0 - delta) * c));
    BoundReport r{"B2", lead + b3, {}};
    r.terms = {{"B3", b3}, {"delta", delta}, {"lead", lead}, {"G", G}};
    return r;
}

BoundReport bound_b2_opt(double alpha, double c) {
    // golden-section over delta
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-6, hi = 2.0 - 1e-6;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = bound_b2(alpha, c, x1).value, f2 = bound_b2(alpha, c, x2).value;
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = bound_b2(alpha, c, x1).value;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = bound_b2(alpha, c, x2).value;
        }
    }
    BoundReport r = bound_b2(alpha, c, 0.5 * (lo + hi));
    r.name = "B2bar";
    return r;
}

BoundReport bound_b4(double alpha, double c) {
    BoundReport b1 = bound_b1(alpha, c), b2 = bound_b2_opt(alpha, c);
    bool first = b1.value <= b2.value;
    BoundReport r{"B4", first ? b1.value : b2.value, {}};
    r.terms = {{"B1", b1.value}, {"B2bar", b2.value}, {"delta", b2.terms["delta"]}, {"branch_b1", first ? 1.0 : 0.0}};
    return r;
}

double Envelope::eval(double x) const {
    if (x >= 1.0) return k_tail;
    for (int i = 0; i < n; ++i)
        if (x <= u[i + 1]) return m[i] * x + q[i];
    return f.back();
}

Envelope build_envelope(double alpha, double c, int n, double u1) {
    check_alpha(alpha);
    if (n < 1) throw DomainError("envelope needs n >= 1");
    if (!(c > 0.0)) throw DomainError("c must be > 0");
    if (!(u1 > 0.0 && u1 < 1.0)) throw DomainError("u1 must lie in (0,1)");
    Envelope e;
    e.n = n;
    e.u.push_back(0.0);
    if (n == 1) {
        e.u.push_back(1.0);
    } else {
        double l0 = std::log(u1);
        for (int i = 0; i < n; ++i) e.u.push_back(std::exp(l0 * (1.0 - double(i) / (n - 1))));
        e.u.back() = 1.0;
    }
    for (double x : e.u) e.f.push_back(c * q_fn(alpha, x));
    for (int i = 0; i < n; ++i) {
        double slope = (e.f[i + 1] - e.f[i]) / (e.u[i + 1] - e.u[i]);
        e.m.push_back(slope);
        e.q.push_back(-slope * e.u[i] + e.f[i]);
    }
    double a = alpha / 2.0;
    e.k_tail = -c * ((1.0 - kInvE) + upper_inc_gamma(1.0 - a, 1.0));
    return e;
}

BoundReport bound_b5(double alpha, double c, int n) {
    check_c(c);
    BoundConstants k = bound_constants(alpha);
    Envelope e = build_envelope(alpha, c, n);
    double inner = 0.0;
    for (int i = 0; i < n; ++i) {
        double mt = e.m[i] + (c - 1.0) * k.g_bar;
        double u0 = e.u[i], u1 = e.u[i + 1];
        // q_i + m_i u_j = f_j, so the exponents stay <= 0
        double e0 = e.f[i] + (c - 1.0) * k.g_bar * u0;
        double e1 = e.f[i + 1] + (c - 1.0) * k.g_bar * u1;
        if (std::fabs(mt) < 1e-12) {
            inner += std::exp(e0) * 0.5 * (u1 * u1 - u0 * u0);
            continue;
        }
        inner += (std::exp(e1) * (u1 - 1.0 / mt) - std::exp(e0) * (u0 - 1.0 / mt)) / mt;
    }
    double kt = e.k_tail - (c - 1.0) * (kInvE - 1.0);
    double lt = (c - 1.0) * k.gamma_bar;
    double log_j = log_tail_term(kt, lt, k.a);
    double j = std::exp(log_j);
    BoundReport r{"B5", c * k.K * (inner + j), {}};
    r.terms = {{"I", inner}, {"J", j}, {"log_J", log_j}, {"k_tail", e.k_tail}, {"n", double(n)}};
    return r;
}

BoundReport bound_b6(double alpha, double c) {
    check_alpha(alpha);
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be finite and > 0");
    double t1 = alpha / (4.0 - alpha) * std::pow(c, (alpha - 4.0) / alpha);
    double t2 = alpha / (2.0 - alpha) * std::pow(c, (alpha - 2.0) / alpha);
    double log_inside = std::lgamma((alpha + 4.0) / alpha) + std::log(t1 + t2 * t2);
    double v = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * log_inside);
    BoundReport r{"B6", v, {}};
    r.terms = {{"fourth", t1}, {"second", t2}};
    return r;
}

double c_of_alpha(double alpha) {
    check_alpha(alpha);
    return std::log(2.0) / (lower_inc_gamma(1.0 - alpha / 2.0, 1.0) + kInvE - 1.0);
}

BoundReport bound_by_name(const std::string& name, double alpha, double c, int n_envelope) {
    if (name == "b1" || name == "B1") return bound_b1(alpha, c);
    if (name == "b2" || name == "B2" || name == "b2bar") return bound_b2_opt(alpha, c);
    if (name == "b4" || name == "B4") return bound_b4(alpha, c);
    if (name == "b5" || name == "B5") return bound_b5(alpha, c, n_envelope);
    if (name == "b6" || name == "B6") return bound_b6(alpha, c);
    throw DomainError("unknown bound name: " + name);
}

ChooseResult choose_c(double alpha, double epsilon, const std::string& bound_name, int n_envelope) {
    check_alpha(alpha);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (bound_name != "b4" && bound_name != "b5" && bound_name != "b6" && bound_name != "B4" &&
        bound_name != "B5" && bound_name != "B6")
        throw DomainError("choose_c supports b4, b5, b6");
    auto bound = [&](double c) { return bound_by_name(bound_name, alpha, c, n_envelope).value; };
    double hi = 2.0, fhi = bound(hi);
    if (fhi <= epsilon) return {hi, fhi};
    double lo = hi, best_c = hi, best = fhi;
    while (fhi > epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw UnreachableTolerance("tolerance not reachable below c = 1e12", best_c, best);
        fhi = bound(hi);
        if (fhi < best) {
            best = fhi;
            best_c = hi;
        }
    }
    while (hi - lo > 9e-4 * hi) {
        double mid = 0.5 * (lo + hi);
        double fm = bound(mid);
        if (fm <= epsilon) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
        }
    }
    return {hi, fhi};
}

}  // namespace stable_psr
