#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace stable_psr {

// Laws with symmetric closed-form CFs. Z and Gauss live in w, the rest in u.
enum class CfKind { Z, Gauss, X, XHat, X0c };

CfKind parse_cf_kind(const std::string& name);
std::string cf_kind_name(CfKind k);

struct CfPair {
    CfKind first;
    CfKind second;
};
// "z" (Z vs Gauss), "xhat" (X vs XHat), "x0c" (X vs X0c), or "A:B"
CfPair parse_cf_pair(const std::string& name);

// log CF of kind k in its native variable (w or u)
double log_cf_native(CfKind k, double alpha, double c, double v);

struct EsseenEstimate {
    double value = 0.0;
    double abs_err = 0.0;
    double theta = std::numeric_limits<double>::infinity();
    std::string pair;
    double lower = 0.0;  // native-variable integration range actually used
    double upper = 0.0;
    int intervals = 0;
};

inline double gaussian_density_bound() { return 0.3989422804014327; }

// (1/pi) int |phi_S - phi_T| / |s| ds over |s| <= theta, plus 24 m/(pi theta)
// when theta is finite. Finite theta is only accepted for Z vs Gauss.
EsseenEstimate esseen_bound(const CfPair& pair, double alpha, double c,
                            double theta = std::numeric_limits<double>::infinity(),
                            double density_bound_m = gaussian_density_bound());

// |exp(l_S) - exp(l_T)| at native variable v
double cf_pair_gap(const CfPair& pair, double alpha, double c, double v);

// Smallest point of a doubling scan past which integrand(x) < threshold
// (checked at x and 2x).
double tail_truncation(const std::function<double(double)>& integrand, double start = 1.0,
                       double threshold = 1e-14);
// Upper native-variable limit for a pair, for the integrand gap(v)/(pi v).
double tail_truncation(const CfPair& pair, double alpha, double c);

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double normal_cdf(double x);

}  // namespace stable_psr
