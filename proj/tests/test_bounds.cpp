#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "stable_psr/bounds.hpp"
#include "stable_psr/errors.hpp"

using namespace stable_psr;
using boost::math::quadrature::gauss_kronrod;

namespace {

// c K int_0^inf w exp((c-1) h(w)) dw, directly
double b1_oracle(double alpha, double c) {
    auto k = bound_constants(alpha);
    auto f = [&](double w) { return w * std::exp(-(c - 1) * h_fn(alpha, w)); };
    double in = gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 20, 1e-13);
    // y = w^a turns the slowly decaying tail into a gamma-like integrand
    double a = k.a;
    auto fy = [&](double y) { return f(std::pow(y, 1 / a)) * std::pow(y, 1 / a - 1) / a; };
    double out = gauss_kronrod<double, 31>::integrate(fy, 1.0, std::numeric_limits<double>::infinity(), 20, 1e-13);
    return c * k.K * (in + out);
}

}  // namespace

TEST(Constants, Values) {
    auto k = bound_constants(1.2);
    EXPECT_DOUBLE_EQ(k.a, 0.6);
    EXPECT_NEAR(k.eta, 0.4 / 0.6, 1e-15);
    EXPECT_NEAR(k.gamma_bar, boost::math::tgamma_lower(0.4, 1.0), 1e-13);
    EXPECT_NEAR(k.g_bar, 1 - std::exp(-1.0) - boost::math::tgamma_lower(0.4, 1.0), 1e-13);
    EXPECT_NEAR(k.K, (0.6 / (2 * 1.4) + 1 / (k.eta * k.eta)) / std::numbers::pi, 1e-15);
    EXPECT_LT(k.g_bar, 0.0);
    EXPECT_THROW(bound_constants(1.0), DomainError);
}

TEST(B1, MatchesDefiningIntegral) {
    for (double al : {0.2, 0.9, 1.5})
        for (double c : {5.0, 20.0, 100.0}) EXPECT_NEAR(bound_b1(al, c).value / b1_oracle(al, c), 1.0, 1e-8) << al << " " << c;
}

TEST(B1, DecreasingAndCrossing) {
    double prev = INFINITY;
    for (double c = 2; c < 1e5; c *= 1.5) {
        double v = bound_b1(0.2, c).value;
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_GT(bound_b1(0.2, 19.0).value, 1.0);
    EXPECT_LT(bound_b1(0.2, 20.0).value, 1.0);
}

TEST(B1, LogSpaceForHugeC) {
    auto r = bound_b1(0.5, 1e5);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_TRUE(std::isfinite(r.terms["log_J"]));
    EXPECT_LT(r.terms["J"], 1e-100);
    auto big = bound_b1(1.5, 1e6);
    auto k = bound_constants(1.5);
    EXPECT_NEAR(big.value * (1e6 - 1) * k.g_bar * k.g_bar / k.K, 1.0, 0.02);
    EXPECT_THROW(bound_b1(0.5, 1.0), DomainError);
}

TEST(B2, ClosedFormB3MatchesIntegral) {
    // B3 = (K/c) int_0^T w exp((c-1) G w / T) dw with T = c(2-delta)
    double al = 0.7, c = 12.0, delta = 0.8;
    auto r = bound_b2(al, c, delta);
    auto k = bound_constants(al);
    double G = r.terms["G"];
    double top = c * (2 - delta);
    auto f = [&](double w) { return w * std::exp((c - 1) * G * w / top); };
    double integral = gauss_kronrod<double, 31>::integrate(f, 0.0, top, 15, 1e-13);
    EXPECT_NEAR(r.terms["B3"], k.K / c * integral, 1e-10 * r.terms["B3"]);
    EXPECT_THROW(bound_b2(al, c, 2.5), DomainError);
}

TEST(B2bar, OptimisesDelta) {
    auto opt = bound_b2_opt(1.1, 40.0);
    for (double d = 0.05; d < 2.0; d += 0.05) EXPECT_LE(opt.value, bound_b2(1.1, 40.0, d).value + 1e-12);
    EXPECT_EQ(opt.name, "B2bar");
}

TEST(B4, Branches) {
    EXPECT_EQ(bound_b4(0.2, 10.0).terms["branch_b1"], 0.0);
    EXPECT_EQ(bound_b4(0.2, 50.0).terms["branch_b1"], 1.0);
    EXPECT_EQ(bound_b4(0.2, 60.0).terms["branch_b1"], 1.0);
    EXPECT_EQ(bound_b4(1.5, 1000.0).terms["branch_b1"], 1.0);
    for (double c : {2.0, 10.0, 60.0})
        EXPECT_DOUBLE_EQ(bound_b4(0.8, c).value, std::min(bound_b1(0.8, c).value, bound_b2_opt(0.8, c).value));
}

TEST(Envelope, DominatesCq) {
    for (double al : {0.3, 1.2, 1.8})
        for (int n : {1, 2, 10}) {
            auto e = build_envelope(al, 10.0, n);
            for (double u = 0.0; u <= 1.0; u += 1e-3) EXPECT_GE(e.eval(u), 10.0 * q_fn(al, u) - 1e-12);
            for (double u : {1.0, 2.0, 50.0}) EXPECT_GE(e.eval(u), 10.0 * q_fn(al, u) - 1e-12);
        }
    auto e = build_envelope(1.2, 10.0, 10);
    EXPECT_NEAR(e.k_tail, -10.0 * (1 - std::exp(-1.0) + boost::math::tgamma(0.4, 1.0)), 1e-10);
    EXPECT_NEAR(e.k_tail, -8.97, 0.01);
    EXPECT_THROW(build_envelope(1.2, 10.0, 0), DomainError);
}

TEST(B5, MatchesQuadratureOfEnvelope) {
    for (double al : {0.5, 1.2})
        for (int n : {1, 10}) {
            double c = 8.0;
            auto e = build_envelope(al, c, n);
            auto k = bound_constants(al);
            auto f = [&](double u) { return u * std::exp(e.eval(u) - (c - 1) * h_fn(al, u)); };
            double in = 0.0;
            for (int i = 0; i < n; ++i)
                in += gauss_kronrod<double, 31>::integrate(f, e.u[i], e.u[i + 1], 15, 1e-13);
            double out = gauss_kronrod<double, 31>::integrate(f, 1.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
            EXPECT_NEAR(bound_b5(al, c, n).value / (c * k.K * (in + out)), 1.0, 1e-8);
        }
}

TEST(B5, ImprovesWithKnots) {
    for (double al : {0.4, 1.6}) {
        EXPECT_LE(bound_b5(al, 20.0, 10).value, bound_b5(al, 20.0, 1).value + 1e-14);
        EXPECT_LE(bound_b5(al, 20.0, 10).value, bound_b5(al, 20.0, 2).value + 1e-14);
    }
    EXPECT_TRUE(std::isfinite(bound_b5(0.3, 5000.0).value));
}

TEST(B6, FormulaAndMonotone) {
    double al = 1.3, c = 7.0;
    double t1 = al / (4 - al) * std::pow(c, (al - 4) / al), t2 = al / (2 - al) * std::pow(c, (al - 2) / al);
    double want = std::exp(-0.5) / std::sqrt(2 * std::numbers::pi) * std::sqrt(std::tgamma((al + 4) / al) * (t1 + t2 * t2));
    EXPECT_NEAR(bound_b6(al, c).value, want, 1e-13);
    EXPECT_GT(bound_b6(al, 3.0).value, bound_b6(al, 30.0).value);
}

TEST(CAlpha, Values) {
    EXPECT_NEAR(c_of_alpha(1.2), 0.52, 0.005);
    EXPECT_LT(c_of_alpha(1.5), 1.0);
    for (double al = 0.11; al < 1.99; al += 0.04)
        if (std::fabs(al - 1) > 1e-3) EXPECT_LT(c_of_alpha(al), 16.5);
}

TEST(ChooseC, PostConditions) {
    for (const char* name : {"b4", "b5", "b6"}) {
        auto r = choose_c(1.2, 0.05, name);
        EXPECT_LE(r.bound, 0.05);
        EXPECT_GT(bound_by_name(name, 1.2, r.c * (1 - 1e-3)).value, 0.05 * 0.999);
    }
    EXPECT_THROW(choose_c(1.2, 1.5, "b5"), DomainError);
    EXPECT_THROW(choose_c(1.2, 0.1, "b1"), DomainError);
    EXPECT_THROW(choose_c(1.2, 1e-300, "b6"), UnreachableTolerance);
}
