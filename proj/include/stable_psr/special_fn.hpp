#pragma once

namespace stable_psr {

// gamma(s,x) = int_0^x t^{s-1} e^{-t} dt
double lower_inc_gamma(double s, double x);
// Gamma(s,x) = int_x^inf t^{s-1} e^{-t} dt; s <= 0 allowed when x > 0
double upper_inc_gamma(double s, double x);
// log Gamma(s,x), finite even when Gamma(s,x) under/overflows
double log_upper_inc_gamma(double s, double x);

double gamma_fn(double s);

double c_alpha_const(double alpha);

// throws DomainError unless 0 < alpha < 2 and |alpha - 1| > 1e-6
void check_alpha(double alpha);

}  // namespace stable_psr
