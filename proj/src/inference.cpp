#include "stable_psr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "stable_psr/errors.hpp"
#include "stable_psr/psr_engine.hpp"
#include "stable_psr/special_fn.hpp"

namespace stable_psr {

void RegressionProblem::validate() const {
    check_alpha(alpha);
    if (!(sigma_w > 0.0)) throw DomainError("sigma_w must be > 0");
    if (!(c > 0.0)) throw DomainError("c must be > 0");
    if (x.size() == 0) throw DomainError("no observations");
    if (g.rows() != x.size()) throw DomainError("regressor rows must match observations");
    if (g.cols() < 1) throw DomainError("need at least one regressor");
    if (prior_mean.size() != g.cols()) throw DomainError("prior mean has wrong length");
    if (prior_precision.rows() != g.cols() || prior_precision.cols() != g.cols())
        throw DomainError("prior precision has wrong shape");
}

double RegressionProblem::residual_floor() const {
    return sigma_w * sigma_w * alpha / (2.0 - alpha) * std::pow(c, (alpha - 2.0) / alpha);
}

double latent_variance(const RegressionProblem& p, double sum_inv2) {
    return p.sigma_w * p.sigma_w * sum_inv2 + p.residual_floor();
}

namespace {

void draw_one(const RegressionProblem& p, Rng& rng, std::vector<double>& gam, double& sum_inv2) {
    gam = poisson_arrivals(p.c, rng);
    sum_inv2 = 0.0;
    const double e = -2.0 / p.alpha;
    for (double t : gam) sum_inv2 += std::pow(t, e);
}

}  // namespace

LatentArrivals draw_latents_from_prior(const RegressionProblem& p, Rng& rng) {
    LatentArrivals l;
    const int n = p.n_obs();
    l.gammas.resize(n);
    l.sum_inv2.resize(n);
    l.var.resize(n);
    for (int i = 0; i < n; ++i) {
        draw_one(p, rng, l.gammas[i], l.sum_inv2[i]);
        l.var[i] = latent_variance(p, l.sum_inv2[i]);
    }
    return l;
}

ChainState init_state(const RegressionProblem& p, Rng& rng) {
    p.validate();
    ChainState s;
    s.lambda = p.prior_mean;
    s.latents = draw_latents_from_prior(p, rng);
    return s;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> conditional_precision(const ChainState& s, const RegressionProblem& p,
                                                  Eigen::VectorXd& mean) {
    Eigen::VectorXd inv_var(p.n_obs());
    for (int i = 0; i < p.n_obs(); ++i) inv_var[i] = 1.0 / s.latents.var[i];
    Eigen::MatrixXd prec = p.prior_precision + p.g.transpose() * inv_var.asDiagonal() * p.g;
    Eigen::VectorXd rhs = p.prior_precision * p.prior_mean + p.g.transpose() * inv_var.cwiseProduct(p.x);
    Eigen::LLT<Eigen::MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success) throw SingularMatrix("posterior precision is not positive definite");
    mean = llt.solve(rhs);
    return llt;
}

}  // namespace

void lambda_conditional(const ChainState& s, const RegressionProblem& p, Eigen::VectorXd& mean,
                        Eigen::MatrixXd& cov) {
    auto llt = conditional_precision(s, p, mean);
    cov = llt.solve(Eigen::MatrixXd::Identity(p.n_params(), p.n_params()));
}

Eigen::VectorXd gibbs_lambda(const ChainState& s, const RegressionProblem& p, Rng& rng) {
    Eigen::VectorXd mean;
    auto llt = conditional_precision(s, p, mean);
    std::normal_distribution<double> nd;
    Eigen::VectorXd z(p.n_params());
    for (int j = 0; j < p.n_params(); ++j) z[j] = nd(rng);
    // prec = L L^T, so L^{-T} z has covariance prec^{-1}
    return mean + llt.matrixU().solve(z);
}

double latent_log_ratio(double r, double var_cur, double var_prop) {
    return -0.5 * std::log(var_prop / var_cur) - 0.5 * r * r * (1.0 / var_prop - 1.0 / var_cur);
}

int metropolis_latents(ChainState& s, const RegressionProblem& p, Rng& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::VectorXd resid = p.x - p.g * s.lambda;
    std::vector<double> gam;
    double sum_inv2 = 0.0;
    int accepted = 0;
    for (int i = 0; i < p.n_obs(); ++i) {
        draw_one(p, rng, gam, sum_inv2);
        double var_prop = latent_variance(p, sum_inv2);
        double lr = latent_log_ratio(resid[i], s.latents.var[i], var_prop);
        if (lr >= 0.0 || std::log(uni(rng)) < lr) {
            s.latents.gammas[i].swap(gam);
            s.latents.sum_inv2[i] = sum_inv2;
            s.latents.var[i] = var_prop;
            ++accepted;
        }
    }
    s.proposed += p.n_obs();
    s.accepted += accepted;
    return accepted;
}

ChainSummary run_chain(const RegressionProblem& p, int iterations, int burn_in, Rng& rng, bool keep_trace) {
    if (!(iterations > burn_in) || burn_in < 0) throw DomainError("need iterations > burn_in >= 0");
    ChainState s = init_state(p, rng);
    const int P = p.n_params();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(P), sum2 = Eigen::VectorXd::Zero(P);
    ChainSummary out;
    long long kept = 0;
    for (int it = 0; it < iterations; ++it) {
        s.lambda = gibbs_lambda(s, p, rng);
        metropolis_latents(s, p, rng);
        ++s.iteration;
        if (it < burn_in) continue;
        sum += s.lambda;
        sum2 += s.lambda.cwiseProduct(s.lambda);
        ++kept;
        if (keep_trace) out.trace.push_back(s.lambda);
    }
    out.mean = sum / double(kept);
    out.std = (sum2 / double(kept) - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0).cwiseSqrt();
    out.acceptance_rate = s.acceptance_rate();
    return out;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
    const std::size_t m = chains.size();
    if (m < 2) throw DomainError("Gelman-Rubin needs at least two chains");
    const std::size_t n = chains[0].size();
    if (n < 2) throw DomainError("chains too short");
    std::vector<double> means(m), vars(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (chains[j].size() != n) throw DomainError("chains must have equal length");
        double mu = 0.0;
        for (double v : chains[j]) mu += v;
        mu /= n;
        double ss = 0.0;
        for (double v : chains[j]) ss += (v - mu) * (v - mu);
        means[j] = mu;
        vars[j] = ss / (n - 1);
    }
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= m;
    double b = 0.0;
    for (double v : means) b += (v - grand) * (v - grand);
    b *= double(n) / (m - 1);
    double w = 0.0;
    for (double v : vars) w += v;
    w /= m;
    double vplus = (n - 1.0) / n * w + b / n;
    return std::sqrt(vplus / w);
}

MultiChainSummary run_chains(const RegressionProblem& p, int n_chains, int iterations, int burn_in,
                             std::uint64_t seed, int max_threads) {
    p.validate();
    if (n_chains < 1) throw DomainError("need at least one chain");
    MultiChainSummary out;
    out.chains.resize(n_chains);
    auto work = [&](int k) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
        Rng rng(seq);
        out.chains[k] = run_chain(p, iterations, burn_in, rng, true);
    };
    int workers = std::max(1, std::min(max_threads, n_chains));
    for (int start = 0; start < n_chains; start += workers) {
        std::vector<std::thread> pool;
        for (int k = start; k < std::min(n_chains, start + workers); ++k) pool.emplace_back(work, k);
        for (auto& t : pool) t.join();
    }
    const int P = p.n_params();
    out.mean = Eigen::VectorXd::Zero(P);
    out.std = Eigen::VectorXd::Zero(P);
    out.r_hat = Eigen::VectorXd::Constant(P, std::nan(""));
    for (auto& c : out.chains) out.mean += c.mean / n_chains;
    for (int j = 0; j < P; ++j) {
        std::vector<std::vector<double>> comp;
        double ss = 0.0, count = 0.0;
        for (auto& c : out.chains) {
            std::vector<double> v;
            v.reserve(c.trace.size());
            for (auto& l : c.trace) {
                v.push_back(l[j]);
                ss += (l[j] - out.mean[j]) * (l[j] - out.mean[j]);
                count += 1.0;
            }
            comp.push_back(std::move(v));
        }
        out.std[j] = std::sqrt(ss / count);
        if (n_chains >= 2) out.r_hat[j] = gelman_rubin(comp);
    }
    return out;
}

RegressionProblem synthetic_problem(int n, const Eigen::VectorXd& lambda_true, double alpha, double sigma_w,
                                    double c, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> nd;
    RegressionProblem p;
    p.alpha = alpha;
    p.sigma_w = sigma_w;
    p.c = c;
    const int P = static_cast<int>(lambda_true.size());
    p.g.resize(n, P);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < P; ++j) p.g(i, j) = nd(rng);
    StableParams noise = map_w_to_stable(alpha, GaussianWParams{0.0, sigma_w});
    p.x = p.g * lambda_true;
    for (int i = 0; i < n; ++i) p.x[i] += cms_draw(noise, rng);
    p.prior_mean = Eigen::VectorXd::Zero(P);
    p.prior_precision = Eigen::MatrixXd::Identity(P, P) * 1e-4;
    p.validate();
    return p;
}

}  // namespace stable_psr
