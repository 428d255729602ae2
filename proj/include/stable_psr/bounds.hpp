#pragma once

#include <map>
#include <string>
#include <vector>

#include "stable_psr/charfns.hpp"

namespace stable_psr {

struct BoundConstants {
    double alpha, a, eta;
    double g_bar;      // g(1)
    double gamma_bar;  // gamma(1-a, 1)
    double K;
};
BoundConstants bound_constants(double alpha);

// -g_bar w on [0,1], e^{-1} - 1 + gamma_bar w^a beyond
double h_fn(double alpha, double w);

struct BoundReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> terms;
};

BoundReport bound_b1(double alpha, double c);
BoundReport bound_b2(double alpha, double c, double delta);
BoundReport bound_b2_opt(double alpha, double c);
BoundReport bound_b4(double alpha, double c);  // terms["branch_b1"] = 1 if B1 won

struct Envelope {
    int n = 0;
    std::vector<double> u, f, m, q;
    double k_tail = 0.0;
    double eval(double u) const;  // piecewise-linear bound of c q(u) on [0,1], k_tail beyond
};
// knots: 0, then n log-spaced points from u1 to 1 (n = 1 gives {0, 1})
Envelope build_envelope(double alpha, double c, int n, double u1 = 1e-4);

BoundReport bound_b5(double alpha, double c, int n = 10);
BoundReport bound_b6(double alpha, double c);
double c_of_alpha(double alpha);

// "b4", "b5" or "b6"
BoundReport bound_by_name(const std::string& name, double alpha, double c, int n_envelope = 10);

struct ChooseResult {
    double c;
    double bound;
};
ChooseResult choose_c(double alpha, double epsilon, const std::string& bound_name, int n_envelope = 10);

}  // namespace stable_psr
