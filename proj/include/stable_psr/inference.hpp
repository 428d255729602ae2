#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "stable_psr/stable_core.hpp"

namespace stable_psr {

struct RegressionProblem {
    Eigen::VectorXd x;
    Eigen::MatrixXd g;
    double alpha = 1.2;
    double sigma_w = 1.0;
    double c = 10.0;
    Eigen::VectorXd prior_mean;
    Eigen::MatrixXd prior_precision;  // zero matrix = flat prior
    double tolerance = 0.0;           // bound level c was chosen for, if any
    void validate() const;
    int n_obs() const { return static_cast<int>(x.size()); }
    int n_params() const { return static_cast<int>(g.cols()); }
    // sigma_w^2 * (alpha/(2-alpha)) c^{(alpha-2)/alpha}
    double residual_floor() const;
};

struct LatentArrivals {
    std::vector<std::vector<double>> gammas;
    std::vector<double> sum_inv2;  // sum Gamma^{-2/alpha} per observation
    std::vector<double> var;       // sigma_n^2
};

struct ChainState {
    Eigen::VectorXd lambda;
    LatentArrivals latents;
    long long iteration = 0;
    long long proposed = 0;
    long long accepted = 0;
    double acceptance_rate() const { return proposed ? double(accepted) / double(proposed) : 0.0; }
};

double latent_variance(const RegressionProblem& p, double sum_inv2);
LatentArrivals draw_latents_from_prior(const RegressionProblem& p, Rng& rng);
ChainState init_state(const RegressionProblem& p, Rng& rng);

Eigen::VectorXd gibbs_lambda(const ChainState& s, const RegressionProblem& p, Rng& rng);
// posterior mean and covariance of lambda given the current variances
void lambda_conditional(const ChainState& s, const RegressionProblem& p, Eigen::VectorXd& mean,
                        Eigen::MatrixXd& cov);

// log acceptance ratio for swapping variance cur -> prop at residual r
double latent_log_ratio(double r, double var_cur, double var_prop);
// refreshes every observation's arrivals; returns the number accepted
int metropolis_latents(ChainState& s, const RegressionProblem& p, Rng& rng);

struct ChainSummary {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    double acceptance_rate = 0.0;
    std::vector<Eigen::VectorXd> trace;  // post burn-in draws (if kept)
};
ChainSummary run_chain(const RegressionProblem& p, int iterations, int burn_in, Rng& rng, bool keep_trace = false);

struct MultiChainSummary {
    std::vector<ChainSummary> chains;
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    Eigen::VectorXd r_hat;
};
// chains run on up to max_threads workers, each seeded from (seed, chain index)
MultiChainSummary run_chains(const RegressionProblem& p, int n_chains, int iterations, int burn_in,
                             std::uint64_t seed, int max_threads = 1);

// potential scale reduction for one scalar over equal-length chains
double gelman_rubin(const std::vector<std::vector<double>>& chains);

RegressionProblem synthetic_problem(int n, const Eigen::VectorXd& lambda_true, double alpha, double sigma_w,
                                    double c, std::uint64_t seed);

}  // namespace stable_psr
