#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "stable_psr/charfns.hpp"
#include "stable_psr/errors.hpp"
#include "stable_psr/psr_engine.hpp"

using namespace stable_psr;

namespace {

const double kAlphas[] = {0.1, 0.3, 0.6, 0.8, 1.2, 1.5, 1.7, 1.9};

double g_oracle(double alpha, double w) {
    double a = alpha / 2;
    return 1 - std::exp(-w) - std::pow(w, a) * boost::math::tgamma_lower(1 - a, w);
}

double q_oracle(double alpha, double u) {
    double a = alpha / 2;
    return -(1 - std::exp(-u) + std::pow(u, a) * boost::math::tgamma(1 - a, u));
}

}  // namespace

TEST(Variables, Conversions) {
    GaussianWParams wp{0.0, 1.7};
    double alpha = 0.8, c = 12.0, s = 2.5;
    double w = w_of_s(alpha, c, s);
    EXPECT_NEAR(w, eta_of(alpha) * s * s / (2 * c), 1e-15);
    // u = sigma_w^2 s^2 c^{-2/alpha} / 2
    EXPECT_NEAR(u_of_s(alpha, c, s, wp), 1.7 * 1.7 * s * s * std::pow(c, -2 / alpha) / 2, 1e-13);
    EXPECT_EQ(half_alpha(1.5), 0.75);
}

TEST(GFunction, AgainstBoost) {
    for (double a : kAlphas)
        for (double w : {1e-6, 1e-3, 0.1, 0.5, 1.0, 1.9, 2.1, 5.0, 30.0, 200.0}) {
            EXPECT_NEAR(g_fn(a, w), g_oracle(a, w), 1e-11 * std::max(1.0, std::fabs(g_oracle(a, w))));
            EXPECT_NEAR(q_fn(a, w), q_oracle(a, w), 1e-11);
            EXPECT_NEAR(g_excess(a, w), g_fn(a, w) + w / eta_of(a), 1e-10 * std::max(1.0, w));
        }
    EXPECT_EQ(g_fn(1.2, 0.0), 0.0);
    EXPECT_EQ(q_fn(1.2, 0.0), 0.0);
    EXPECT_THROW(g_fn(1.2, -1.0), DomainError);
}

TEST(GFunction, Properties) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> lw(-6.0, 2.5);
    for (double al : kAlphas) {
        double a = al / 2, eta = (1 - a) / a;
        double gbar = g_fn(al, 1.0), gam = boost::math::tgamma_lower(1 - a, 1.0);
        for (int i = 0; i < 1000; ++i) {
            double w = std::pow(10.0, lw(rng));
            double g = g_fn(al, w);
            EXPECT_LE(g, -(-std::expm1(-w)) / eta + 1e-14);
            EXPECT_GE(g, -w / eta - 1e-14);
            if (w <= 1.0) {
                EXPECT_LE(g, -w / (2 * eta) + 1e-14);
                EXPECT_LE(g, gbar * w + 1e-14);
            } else {
                EXPECT_LE(g, 1 - std::exp(-1.0) - gam * std::pow(w, a) + 1e-12);
            }
            // derivatives by central differences
            double h = 1e-4 * std::max(w, 1e-3);
            if (w > h) {
                double d1 = (g_fn(al, w + h) - g_fn(al, w - h)) / (2 * h);
                EXPECT_LE(d1, 1e-6);
                EXPECT_GE(d1, -1 / eta - 1e-6);
                double d2 = (g_excess(al, w + h) - 2 * g_excess(al, w) + g_excess(al, w - h)) / (h * h);
                EXPECT_GE(d2, -1e-3 * (1 + std::fabs(d2)));
                EXPECT_LE(d2, a / (2 - a) + 1e-3);
            }
            double q = q_fn(al, w);
            EXPECT_LT(q, 0.0);
            EXPECT_GT(q, -1.0 - 1e-12);
            EXPECT_LE(q_fn(al, w * 1.01), q + 1e-15);
            if (w < 20) EXPECT_LT(q_fn(al, w * 1.01), q);
        }
        EXPECT_NEAR(q_fn(al, 1e4), -1.0, 1e-9);
    }
}

TEST(ZSeries, Basics) {
    GaussianWParams sym{0.0, 1.0};
    EXPECT_EQ(log_cf_Z_series(1.2, sym, 10.0, 0.0).value, std::complex<double>(0.0, 0.0));
    auto v = log_cf_Z_series(1.2, sym, 10.0, 1.0, 40);
    EXPECT_EQ(v.value.imag(), 0.0);
    EXPECT_NEAR(v.value.real(), log_cf_Z_closed(1.2, 10.0, w_of_s(1.2, 10.0, 1.0)), 1e-9);
    EXPECT_THROW(log_cf_Z_series(1.2, sym, 10.0, 1.0, 2), DomainError);
}

TEST(ZSeries, MatchesClosedForm) {
    GaussianWParams sym{0.0, 2.0};
    for (double al : {0.3, 0.8, 1.2, 1.7})
        for (double c : {2.0, 10.0, 100.0})
            for (double w = 0.0; w <= 3.0; w += 0.25) {
                double s = std::sqrt(2 * c * w / eta_of(al));
                auto v = log_cf_Z_series(al, sym, c, s);
                EXPECT_NEAR(v.value.real(), log_cf_Z_closed(al, c, w), 1e-9) << al << " " << c << " " << w;
            }
}

TEST(RIntegral, MatchesClosedForm) {
    GaussianWParams sym{0.0, 1.3};
    for (double al : {0.3, 0.8, 1.2, 1.7})
        for (double c : {2.0, 10.0})
            for (double s : {0.3, 1.0, 4.0, 15.0}) {
                auto v = log_cf_R_integral(al, sym, c, std::nullopt, s);
                double u = u_of_s(al, c, s, sym);
                EXPECT_NEAR(v.real(), log_cf_R_closed(al, c, u), 1e-8);
                EXPECT_NEAR(v.imag(), 0.0, 1e-12);
            }
}

TEST(RIntegral, SkewedAgreesWithSeries) {
    // Z = (R - m)/S, so log phi_Z(s) = log phi_R(s/S) - i s m/S
    GaussianWParams wp{0.6, 1.0};
    for (double al : {0.8, 1.2, 1.6}) {
        double c = 10.0;
        auto rm = residual_moments({al, wp, c, std::nullopt});
        double S = std::sqrt(rm.var);
        for (double s : {0.2, 0.8, 1.5}) {
            auto z = log_cf_Z_series(al, wp, c, s).value;
            auto r = log_cf_R_integral(al, wp, c, std::nullopt, s / S) - std::complex<double>(0, s * rm.mean / S);
            EXPECT_NEAR(std::abs(z - r), 0.0, 1e-8) << al << " " << s;
        }
    }
}

TEST(RIntegral, FiniteD) {
    GaussianWParams wp{0.5, 1.0};
    PsrConfig cfg{1.4, wp, 5.0, 5.0 + 1e-7};
    auto v = log_cf_R_integral(1.4, wp, 5.0, 5.0 + 1e-7, 0.7);
    EXPECT_NEAR(v.real(), 0.0, 1e-6);
    EXPECT_NEAR(v.imag(), -0.7 * centring_b(cfg), 1e-6);
    // large d approaches the infinite form
    auto far = log_cf_R_integral(1.4, wp, 5.0, 1e12, 0.7);
    auto inf = log_cf_R_integral(1.4, wp, 5.0, std::nullopt, 0.7);
    EXPECT_NEAR(std::abs(far - inf), 0.0, 1e-5);
    EXPECT_EQ(log_cf_R_integral(1.4, wp, 5.0, 9.0, 0.0), std::complex<double>(0.0, 0.0));
}

TEST(Factorization, StableExponent) {
    GaussianWParams sym{0.0, 1.0};
    for (double al : {0.3, 0.8, 1.2, 1.7}) {
        auto st = map_w_to_stable(al, sym);
        for (double c : {2.0, 10.0, 100.0})
            for (double s = 0.1; s <= 10.0; s *= 1.6) {
                double u = u_of_s(al, c, s, sym);
                double lhs = log_cf_X0c_closed(al, c, u) + log_cf_R_closed(al, c, u);
                EXPECT_NEAR(lhs, log_cf_stable_u(al, c, u), 1e-8 * std::max(1.0, std::fabs(lhs)));
                EXPECT_NEAR(lhs, stable_log_cf(st, s).real(), 1e-8 * std::max(1.0, std::fabs(lhs)));
            }
    }
}

TEST(ClosedForms, ModulusAndLimits) {
    for (double al : kAlphas)
        for (double v : {0.0, 0.01, 0.5, 3.0, 40.0}) {
            EXPECT_LE(log_cf_Z_closed(al, 7.0, v), 0.0);
            EXPECT_LE(log_cf_X0c_closed(al, 7.0, v), 0.0);
            EXPECT_LE(log_cf_x_hat(al, 7.0, v), 0.0);
            EXPECT_DOUBLE_EQ(log_cf_x_hat(al, 7.0, v), log_cf_X0c_closed(al, 7.0, v) + log_cf_R_hat(al, 7.0, v));
        }
    EXPECT_NEAR(log_cf_X0c_closed(0.8, 10.0, 1e6), -10.0, 1e-8);
    // Z approaches the standard normal as c grows
    double prev = INFINITY;
    for (double c : {10.0, 100.0, 1e3, 1e4, 1e5}) {
        double err = std::fabs(log_cf_Z_closed(1.2, c, w_of_s(1.2, c, 1.0)) + 0.5);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
    // X-hat approaches the stable law at fixed s
    GaussianWParams sym{0.0, 1.0};
    auto st = map_w_to_stable(1.2, sym);
    double u = u_of_s(1.2, 1e6, 1.0, sym);
    EXPECT_NEAR(log_cf_x_hat(1.2, 1e6, u), stable_log_cf(st, 1.0).real(), 1e-4);
}
