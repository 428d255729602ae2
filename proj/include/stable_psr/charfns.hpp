#pragma once

#include <complex>
#include <optional>

#include "stable_psr/stable_core.hpp"

namespace stable_psr {

// a = alpha/2, eta = (1-a)/a
double half_alpha(double alpha);
double eta_of(double alpha);
double w_of_s(double alpha, double c, double s);
// u = w * S^2_(c,inf)
double u_of_w(double alpha, double c, double w, const GaussianWParams& wp);
double u_of_s(double alpha, double c, double s, const GaussianWParams& wp);

// g(w) = 1 - e^{-w} - w^a gamma(1-a, w)
double g_fn(double alpha, double w);
// g(w) + w/eta, accurate near 0
double g_excess(double alpha, double w);
// q(u) = -(1 - e^{-u} + u^a Gamma(1-a, u))
double q_fn(double alpha, double u);

struct SeriesValue {
    std::complex<double> value;
    double last_term;
    int k_used;
};

// log CF of the standardised residual Z_(c,inf) as a power series in s
SeriesValue log_cf_Z_series(double alpha, const GaussianWParams& w, double c, double s, int k_max = 200);

// log CF of R_(c,inf) (d empty) or R_(c,d) by quadrature
std::complex<double> log_cf_R_integral(double alpha, const GaussianWParams& w, double c,
                                       std::optional<double> d, double s);

// symmetric closed forms
double log_cf_Z_closed(double alpha, double c, double w);      // c g(w)
double log_cf_Z_gauss(double alpha, double c, double w);       // -c w / eta
double log_cf_R_closed(double alpha, double c, double u);      // c g(u)
double log_cf_R_hat(double alpha, double c, double u);         // -c u / eta
double log_cf_X0c_closed(double alpha, double c, double u);    // c q(u)
double log_cf_x_hat(double alpha, double c, double u);
double log_cf_stable_u(double alpha, double c, double u);      // -c u^a Gamma(1-a)

}  // namespace stable_psr
