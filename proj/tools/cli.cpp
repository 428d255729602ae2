#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <thread>

#include "stable_psr/bounds.hpp"
#include "stable_psr/charfns.hpp"
#include "stable_psr/distance.hpp"
#include "stable_psr/errors.hpp"
#include "stable_psr/inference.hpp"
#include "stable_psr/psr_engine.hpp"
#include "stable_psr/special_fn.hpp"
#include "stable_psr/stable_core.hpp"

namespace stable_psr::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("STABLE_PSR_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// results come back in index order whatever the worker count
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn) {
    std::vector<R> out(n);
    std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

// Writes to --out when given, else to the run() stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open output file " + path);
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

struct WOpts {
    double mu_w = 0.0;
    double sigma_w = 1.0;
    GaussianWParams params() const { return {mu_w, sigma_w}; }
};

void add_w(CLI::App* app, WOpts& w) {
    app->add_option("--mu-w", w.mu_w, "mean of the Gaussian weights W")->capture_default_str();
    app->add_option("--sigma-w", w.sigma_w, "std-dev of the Gaussian weights W (>= 0)")->capture_default_str();
}

std::vector<double> alpha_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find(':') != std::string::npos) {
            for (double v : parse_grid(item, false).values) out.push_back(v);
        } else {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw UsageError("bad alpha value: " + item);
            }
        }
    }
    if (out.empty()) throw UsageError("empty alpha list");
    return out;
}

// alpha grids from the figures skip alpha = 1
std::vector<double> alpha_steps(double lo, double hi, double step) {
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double a = std::round((lo + k * step) * 1e6) / 1e6;
        if (a > hi + 1e-9) break;
        if (std::fabs(a - 1.0) > 1e-9) out.push_back(a);
    }
    return out;
}

// ---- sample ----

struct SampleOpts {
    std::string method = "xhat";
    double alpha = 1.5;
    WOpts w;
    double c = 100.0;
    double d = 0.0;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string out;
};

void cmd_sample(const SampleOpts& o, std::ostream& os) {
    Rng rng(o.seed);
    PsrConfig cfg{o.alpha, o.w.params(), o.c, std::nullopt};
    std::vector<double> xs;
    if (o.method == "cms") {
        xs = cms_sample(map_w_to_stable(o.alpha, o.w.params()), rng, o.n);
    } else if (o.method == "x0c") {
        xs = sample_x0c_n(cfg, rng, o.n);
    } else if (o.method == "xhat") {
        xs = sample_x_hat_n(cfg, rng, o.n);
    } else {
        cfg.d = o.d > 0 ? o.d : default_far_truncation(o.c);
        xs = sample_residual_n(cfg, rng, o.n);
    }
    Sink sink(o.out, os);
    *sink << "x\n";
    for (double x : xs) *sink << num(x, 17) << '\n';
}

// ---- cf ----

struct CfOpts {
    std::string form = "z-closed";
    double alpha = 1.5;
    WOpts w;
    double c = 10.0;
    double d = 0.0;
    std::string grid = "0:5:51";
    bool log = false;
    std::string var = "s";
    int k_max = 200;
    std::string out;
};

void cmd_cf(const CfOpts& o, std::ostream& os) {
    check_alpha(o.alpha);
    const GaussianWParams wp = o.w.params();
    wp.validate();
    const bool symmetric_form = o.form != "z-series" && o.form != "r-integral" && o.form != "stable";
    if (symmetric_form && o.w.mu_w != 0.0) throw DomainError("closed forms need mu_w = 0");
    const double eta = eta_of(o.alpha);
    PsrConfig cfg{o.alpha, wp, o.c, std::nullopt};
    const double s2 = residual_moments(cfg).var;
    std::vector<double> grid = parse_grid(o.grid, o.log).values;
    auto row = [&](std::size_t i) -> std::complex<double> {
        double v = grid[i];
        double s, w, u;
        if (o.var == "s") {
            s = v;
            w = w_of_s(o.alpha, o.c, s);
            u = w * s2;
        } else if (o.var == "w") {
            w = v;
            s = std::sqrt(2.0 * o.c * w / eta);
            u = w * s2;
        } else {
            u = v;
            w = u / s2;
            s = std::sqrt(2.0 * o.c * w / eta);
        }
        if (o.form == "z-series") return log_cf_Z_series(o.alpha, wp, o.c, s, o.k_max).value;
        if (o.form == "z-closed") return log_cf_Z_closed(o.alpha, o.c, w);
        if (o.form == "z-gauss") return log_cf_Z_gauss(o.alpha, o.c, w);
        if (o.form == "r-integral")
            return log_cf_R_integral(o.alpha, wp, o.c, o.d > 0 ? std::optional<double>(o.d) : std::nullopt, s);
        if (o.form == "r-closed") return log_cf_R_closed(o.alpha, o.c, u);
        if (o.form == "r-hat") return log_cf_R_hat(o.alpha, o.c, u);
        if (o.form == "x0c") return log_cf_X0c_closed(o.alpha, o.c, u);
        if (o.form == "xhat") return log_cf_x_hat(o.alpha, o.c, u);
        return stable_log_cf(map_w_to_stable(o.alpha, wp), s);
    };
    auto vals = parallel_map<std::complex<double>>(grid.size(), row);
    Sink sink(o.out, os);
    *sink << o.var << ",re,im\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        *sink << num(grid[i]) << ',' << num(vals[i].real(), 15) << ',' << num(vals[i].imag(), 15) << '\n';
}

// ---- bound ----

struct BoundOpts {
    std::string name = "b1";
    std::string alpha = "1.5";
    std::string c_grid = "2:50";
    bool log = false;
    double delta = 1.0;
    int n_env = 10;
    std::string out;
};

void cmd_bound(const BoundOpts& o, std::ostream& os) {
    auto alphas = alpha_list(o.alpha);
    std::vector<double> cs = o.name == "c-alpha" ? std::vector<double>{0.0} : parse_grid(o.c_grid, o.log).values;
    struct Row {
        double value;
        std::string branch;
    };
    auto fn = [&](std::size_t idx) -> Row {
        double a = alphas[idx / cs.size()], c = cs[idx % cs.size()];
        if (o.name == "c-alpha") return {c_of_alpha(a), "c_alpha"};
        if (o.name == "b2") return {bound_b2(a, c, o.delta).value, "B2"};
        BoundReport r = bound_by_name(o.name, a, c, o.n_env);
        std::string branch = r.name;
        if (r.name == "B4") branch = r.terms.at("branch_b1") > 0.5 ? "B1" : "B2bar";
        return {r.value, branch};
    };
    auto rows = parallel_map<Row>(alphas.size() * cs.size(), fn);
    Sink sink(o.out, os);
    *sink << "c,alpha,bound,branch\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        *sink << num(cs[i % cs.size()]) << ',' << num(alphas[i / cs.size()]) << ',' << num(rows[i].value, 15) << ','
              << rows[i].branch << '\n';
}

// ---- choose-c ----

struct ChooseOpts {
    double alpha = 1.5;
    double epsilon = 0.01;
    std::string bound = "b5";
    int n_env = 10;
    std::string out;
};

void cmd_choose(const ChooseOpts& o, std::ostream& os) {
    ChooseResult r = choose_c(o.alpha, o.epsilon, o.bound, o.n_env);
    nlohmann::json j = {{"alpha", o.alpha}, {"epsilon", o.epsilon}, {"bound", o.bound}, {"c", r.c}, {"value", r.bound}};
    Sink sink(o.out, os);
    *sink << j.dump() << '\n';
}

// ---- distance ----

struct DistanceOpts {
    std::string pair = "z";
    std::string alpha = "1.5";
    std::string c_grid = "3:300:10";
    bool log = false;
    double theta = 0.0;
    double m = gaussian_density_bound();
    std::string out;
};

void cmd_distance(const DistanceOpts& o, std::ostream& os) {
    CfPair pair = parse_cf_pair(o.pair);
    auto alphas = alpha_list(o.alpha);
    auto cs = parse_grid(o.c_grid, o.log).values;
    double theta = o.theta > 0 ? o.theta : std::numeric_limits<double>::infinity();
    auto fn = [&](std::size_t idx) {
        return esseen_bound(pair, alphas[idx / cs.size()], cs[idx % cs.size()], theta, o.m);
    };
    auto rows = parallel_map<EsseenEstimate>(alphas.size() * cs.size(), fn);
    Sink sink(o.out, os);
    *sink << "c,alpha,qbar,abs_err\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        *sink << num(cs[i % cs.size()]) << ',' << num(alphas[i / cs.size()]) << ',' << num(rows[i].value, 15) << ','
              << num(rows[i].abs_err, 6) << '\n';
}

// ---- infer ----

struct InferOpts {
    std::string data;
    double alpha = 1.2;
    double sigma_w = 1.0;
    double c = 0.0;
    double epsilon = 0.0;
    int iters = 20000;
    int burn_in = 2000;
    int chains = 4;
    std::uint64_t seed = 1;
    double prior_var = 1e4;
    std::string trace;
    std::string out;
};

RegressionProblem read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file " + path);
    std::string line;
    if (!std::getline(in, line)) throw UsageError("data file is empty");
    std::size_t cols = std::count(line.begin(), line.end(), ',') + 1;
    if (cols < 2) throw UsageError("data file needs columns x,g_1,...,g_P");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                r.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw UsageError("non-numeric cell in data file: " + cell);
            }
        }
        if (r.size() != cols) throw UsageError("ragged row in data file");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw UsageError("data file has no rows");
    RegressionProblem p;
    const int n = static_cast<int>(rows.size()), P = static_cast<int>(cols) - 1;
    p.x.resize(n);
    p.g.resize(n, P);
    for (int i = 0; i < n; ++i) {
        p.x[i] = rows[i][0];
        for (int j = 0; j < P; ++j) p.g(i, j) = rows[i][j + 1];
    }
    return p;
}

void cmd_infer(const InferOpts& o, std::ostream& os) {
    if ((o.c > 0) == (o.epsilon > 0)) throw UsageError("give exactly one of --c and --epsilon");
    RegressionProblem p = read_problem(o.data);
    p.alpha = o.alpha;
    p.sigma_w = o.sigma_w;
    if (o.c > 0) {
        p.c = o.c;
    } else {
        p.c = choose_c(o.alpha, o.epsilon, "b5", 10).c;
        p.tolerance = o.epsilon;
    }
    const int P = p.n_params();
    p.prior_mean = Eigen::VectorXd::Zero(P);
    p.prior_precision = Eigen::MatrixXd::Identity(P, P) / o.prior_var;
    MultiChainSummary s = run_chains(p, o.chains, o.iters, o.burn_in, o.seed, worker_count());
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    nlohmann::json j;
    j["alpha"] = p.alpha;
    j["sigma_w"] = p.sigma_w;
    j["c"] = p.c;
    if (p.tolerance > 0) j["epsilon"] = p.tolerance;
    j["chains"] = o.chains;
    j["iterations"] = o.iters;
    j["burn_in"] = o.burn_in;
    j["seed"] = o.seed;
    j["mean"] = vec(s.mean);
    j["std"] = vec(s.std);
    if (o.chains >= 2) j["r_hat"] = vec(s.r_hat);
    std::vector<double> acc;
    for (auto& c : s.chains) acc.push_back(c.acceptance_rate);
    j["acceptance_rate"] = acc;
    Sink sink(o.out, os);
    *sink << j.dump(2) << '\n';
    if (!o.trace.empty()) {
        std::ofstream tr(o.trace);
        if (!tr) throw std::runtime_error("cannot open trace file " + o.trace);
        tr << "chain,iter";
        for (int k = 0; k < P; ++k) tr << ",lambda_" << (k + 1);
        tr << '\n';
        for (std::size_t ch = 0; ch < s.chains.size(); ++ch)
            for (std::size_t it = 0; it < s.chains[ch].trace.size(); ++it) {
                tr << ch << ',' << (it + o.burn_in);
                for (int k = 0; k < P; ++k) tr << ',' << num(s.chains[ch].trace[it][k], 15);
                tr << '\n';
            }
    }
}

// ---- figures ----

struct FigureOpts {
    std::string out_dir = "figures";
    bool quick = false;
    std::uint64_t seed = 1;
};

std::ofstream open_fig(const FigureOpts& o, const std::string& name, const std::string& header) {
    std::ofstream f(std::filesystem::path(o.out_dir) / name);
    if (!f) throw std::runtime_error("cannot write " + name);
    f << header << '\n';
    return f;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
    return v;
}

void fig_curves(const FigureOpts& o, const std::string& file, const std::vector<double>& alphas,
                const std::vector<double>& cs, const std::function<double(double, double)>& f) {
    auto vals = parallel_map<double>(alphas.size() * cs.size(),
                                     [&](std::size_t i) { return f(alphas[i / cs.size()], cs[i % cs.size()]); });
    auto out = open_fig(o, file, "alpha,c,value");
    for (std::size_t i = 0; i < vals.size(); ++i)
        out << num(alphas[i / cs.size()]) << ',' << num(cs[i % cs.size()]) << ',' << num(vals[i], 15) << '\n';
}

void fig_pairs(const FigureOpts& o, const std::string& file, const std::string& header,
               const std::vector<double>& alphas, const std::vector<double>& cs,
               const std::function<std::pair<double, double>(double, double)>& f) {
    auto vals = parallel_map<std::pair<double, double>>(
        alphas.size() * cs.size(), [&](std::size_t i) { return f(alphas[i / cs.size()], cs[i % cs.size()]); });
    auto out = open_fig(o, file, header);
    for (std::size_t i = 0; i < vals.size(); ++i)
        out << num(alphas[i / cs.size()]) << ',' << num(cs[i % cs.size()]) << ',' << num(vals[i].first, 15) << ','
            << num(vals[i].second, 15) << '\n';
}

void cmd_figures(const FigureOpts& o, std::ostream& os) {
    std::filesystem::create_directories(o.out_dir);
    const int pts = o.quick ? 8 : 40;
    const auto all = alpha_steps(0.1, 1.9, 0.1);
    const auto coarse = alpha_steps(0.4, 1.9, 0.5);
    const auto b5_alphas = std::vector<double>{0.1, 0.5, 0.9, 1.3, 1.7, 1.9};
    const double inf = std::numeric_limits<double>::infinity();

    {
        const std::size_t n = o.quick ? 1000 : 10000;
        auto out = open_fig(o, "density_samples.csv", "alpha,c,method,x");
        Rng rng(o.seed);
        for (double a : {0.8, 1.2, 1.9})
            for (double c : {100.0, 500.0}) {
                PsrConfig cfg{a, {0.0, 1.0}, c, std::nullopt};
                auto put = [&](const char* m, const std::vector<double>& xs) {
                    for (double x : xs) out << num(a) << ',' << num(c) << ',' << m << ',' << num(x, 15) << '\n';
                };
                put("x0c", sample_x0c_n(cfg, rng, n));
                put("xhat", sample_x_hat_n(cfg, rng, n));
                put("cms", cms_sample(map_w_to_stable(a, cfg.w), rng, n));
            }
    }
    std::vector<double> c_small;
    for (double c = 12; c <= 50; c += o.quick ? 8 : 1) c_small.push_back(c);
    fig_curves(o, "b1_curves.csv", coarse, c_small, [](double a, double c) { return bound_b1(a, c).value; });
    fig_curves(o, "b2bar_curves.csv", coarse, c_small, [](double a, double c) { return bound_b2_opt(a, c).value; });
    fig_curves(o, "b4_curves.csv", coarse, c_small, [](double a, double c) { return bound_b4(a, c).value; });
    fig_pairs(o, "qbar_z_vs_b4.csv", "alpha,c,qbar,b4", all, logspace(3, 300, pts), [&](double a, double c) {
        return std::make_pair(esseen_bound({CfKind::Z, CfKind::Gauss}, a, c, inf).value, bound_b4(a, c).value);
    });
    for (int n : {1, 2, 10})
        fig_curves(o, "b5_curves_n" + std::to_string(n) + ".csv", b5_alphas, logspace(1.01, 1e6, pts),
                   [n](double a, double c) { return bound_b5(a, c, n).value; });
    fig_pairs(o, "qbar_xhat_vs_b5.csv", "alpha,c,qbar,b5", all, logspace(1.01, 5000, pts), [&](double a, double c) {
        return std::make_pair(esseen_bound({CfKind::X, CfKind::XHat}, a, c, inf).value, bound_b5(a, c, 10).value);
    });
    fig_curves(o, "b6_curves.csv", b5_alphas, logspace(1, 100, pts),
               [](double a, double c) { return bound_b6(a, c).value; });
    fig_pairs(o, "qbar_x0c_vs_b6.csv", "alpha,c,qbar,b6", {0.1, 0.5, 1.9}, logspace(1, 1000, pts),
              [&](double a, double c) {
                  return std::make_pair(esseen_bound({CfKind::X, CfKind::X0c}, a, c, inf).value,
                                        bound_b6(a, c).value);
              });
    {
        auto out = open_fig(o, "c_alpha.csv", "alpha,c_alpha");
        for (double a : all) out << num(a) << ',' << num(c_of_alpha(a), 15) << '\n';
    }
    fig_pairs(o, "qbar_residual_comparison.csv", "alpha,c,qbar_xhat,qbar_x0c", all, logspace(1, 5000, pts),
              [&](double a, double c) {
                  return std::make_pair(esseen_bound({CfKind::X, CfKind::XHat}, a, c, inf).value,
                                        esseen_bound({CfKind::X, CfKind::X0c}, a, c, inf).value);
              });
    os << "wrote figure data to " << o.out_dir << '\n';
}

}  // namespace

Grid parse_grid(const std::string& spec, bool log_spacing) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad grid '" + spec + "': expected start:stop[:count]");
        }
    }
    if (parts.size() == 1) return {{parts[0]}};
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("bad grid '" + spec + "': expected start:stop[:count]");
    double lo = parts[0], hi = parts[1];
    if (hi < lo) throw UsageError("grid stop must not be below start");
    Grid g;
    if (parts.size() == 2) {
        if (log_spacing) throw UsageError("--log needs an explicit count");
        for (int k = 0; lo + k <= hi + 1e-9; ++k) g.values.push_back(lo + k);
        return g;
    }
    double cnt = parts[2];
    if (cnt < 1 || cnt != std::floor(cnt)) throw UsageError("grid count must be a positive integer");
    int n = static_cast<int>(cnt);
    if (n == 1) return {{lo}};
    if (log_spacing && !(lo > 0)) throw UsageError("log grid needs start > 0");
    for (int i = 0; i < n; ++i) {
        double t = double(i) / (n - 1);
        g.values.push_back(log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
    }
    g.values.back() = hi;
    return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson series representation toolkit for alpha-stable laws", "stable-psr"};
    app.require_subcommand(1);

    SampleOpts so;
    auto* sample = app.add_subcommand("sample", "draw samples (CSV column x)");
    sample->add_option("--method", so.method, "cms | x0c | xhat | residual")
        ->check(CLI::IsMember({"cms", "x0c", "xhat", "residual"}))
        ->capture_default_str();
    sample->add_option("--alpha", so.alpha, "tail index in (0,2), alpha != 1")->capture_default_str();
    add_w(sample, so.w);
    sample->add_option("--c", so.c, "truncation level (> 0)")->capture_default_str();
    sample->add_option("--d", so.d, "far truncation for --method residual (default max(1e6, 1e4 c))");
    sample->add_option("--n", so.n, "number of draws")->capture_default_str();
    sample->add_option("--seed", so.seed, "random seed")->capture_default_str();
    sample->add_option("--out", so.out, "output file (default stdout)");

    CfOpts co;
    auto* cf = app.add_subcommand("cf", "evaluate a log characteristic function on a grid (CSV var,re,im)");
    cf->add_option("--form", co.form,
                   "z-series | z-closed | z-gauss | r-integral | r-closed | r-hat | x0c | xhat | stable")
        ->check(CLI::IsMember({"z-series", "z-closed", "z-gauss", "r-integral", "r-closed", "r-hat", "x0c", "xhat",
                               "stable"}))
        ->capture_default_str();
    cf->add_option("--alpha", co.alpha, "tail index")->capture_default_str();
    add_w(cf, co.w);
    cf->add_option("--c", co.c, "truncation level")->capture_default_str();
    cf->add_option("--d", co.d, "far truncation for r-integral (default: infinite)");
    cf->add_option("--grid", co.grid, "start:stop[:count] in the chosen variable")->capture_default_str();
    cf->add_flag("--log", co.log, "log-spaced grid");
    cf->add_option("--var", co.var, "grid variable: s (frequency), w or u")
        ->check(CLI::IsMember({"s", "w", "u"}))
        ->capture_default_str();
    cf->add_option("--k-max", co.k_max, "series truncation order for z-series")->capture_default_str();
    cf->add_option("--out", co.out, "output file (default stdout)");

    BoundOpts bo;
    auto* bound = app.add_subcommand("bound", "evaluate a Kolmogorov-distance bound over a c grid (CSV)");
    bound->add_option("--name", bo.name, "b1 | b2 | b2bar | b4 | b5 | b6 | c-alpha")
        ->check(CLI::IsMember({"b1", "b2", "b2bar", "b4", "b5", "b6", "c-alpha"}))
        ->capture_default_str();
    bound->add_option("--alpha", bo.alpha, "alpha value, comma list, or start:stop:count")->capture_default_str();
    bound->add_option("--c-grid", bo.c_grid, "start:stop[:count]")->capture_default_str();
    bound->add_flag("--log", bo.log, "log-spaced c grid");
    bound->add_option("--delta", bo.delta, "delta in (0,2) for b2")->capture_default_str();
    bound->add_option("--n-envelope", bo.n_env, "envelope segments for b5")->capture_default_str();
    bound->add_option("--out", bo.out, "output file (default stdout)");

    ChooseOpts cho;
    auto* choose = app.add_subcommand("choose-c", "smallest c with bound <= epsilon (JSON)");
    choose->add_option("--alpha", cho.alpha, "tail index")->capture_default_str();
    choose->add_option("--epsilon", cho.epsilon, "target in (0,1)")->capture_default_str();
    choose->add_option("--bound", cho.bound, "b4 | b5 | b6")
        ->check(CLI::IsMember({"b4", "b5", "b6"}))
        ->capture_default_str();
    choose->add_option("--n-envelope", cho.n_env, "envelope segments for b5")->capture_default_str();
    choose->add_option("--out", cho.out, "output file (default stdout)");

    DistanceOpts dop;
    auto* dist = app.add_subcommand("distance", "smoothing-integral estimate Q for a CF pair (CSV)");
    dist->add_option("--pair", dop.pair, "z | xhat | x0c | A:B with A,B in {z,gauss,x,xhat,x0c}")
        ->capture_default_str();
    dist->add_option("--alpha", dop.alpha, "alpha value, comma list, or start:stop:count")->capture_default_str();
    dist->add_option("--c-grid", dop.c_grid, "start:stop[:count]")->capture_default_str();
    dist->add_flag("--log", dop.log, "log-spaced c grid");
    dist->add_option("--theta", dop.theta, "finite smoothing frequency (z pair only; default infinite)");
    dist->add_option("--m", dop.m, "density bound used with --theta")->capture_default_str();
    dist->add_option("--out", dop.out, "output file (default stdout)");

    InferOpts io;
    auto* infer = app.add_subcommand("infer", "posterior for x = G lambda + stable noise (JSON)");
    infer->add_option("--data", io.data, "CSV with header: x,g_1,...,g_P")->required();
    infer->add_option("--alpha", io.alpha, "noise tail index")->capture_default_str();
    infer->add_option("--sigma-w", io.sigma_w, "noise weight std-dev")->capture_default_str();
    infer->add_option("--c", io.c, "truncation level");
    infer->add_option("--epsilon", io.epsilon, "pick c by B5 <= epsilon instead of --c");
    infer->add_option("--iters", io.iters, "iterations per chain")->capture_default_str();
    infer->add_option("--burn-in", io.burn_in, "discarded iterations")->capture_default_str();
    infer->add_option("--chains", io.chains, "independent chains")->capture_default_str();
    infer->add_option("--seed", io.seed, "random seed")->capture_default_str();
    infer->add_option("--prior-var", io.prior_var, "variance of the zero-mean Gaussian prior")->capture_default_str();
    infer->add_option("--trace", io.trace, "optional trace CSV path");
    infer->add_option("--out", io.out, "output file (default stdout)");

    FigureOpts fo;
    auto* figs = app.add_subcommand("figures", "write the data behind the bound, Q and density figures as CSV");
    figs->add_option("--out-dir", fo.out_dir, "directory for the CSV files")->capture_default_str();
    figs->add_flag("--quick", fo.quick, "coarser grids and fewer samples");
    figs->add_option("--seed", fo.seed, "random seed for the density samples")->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        // subcommand --help lands here too
        if (e.get_exit_code() == 0) {
            for (auto* sub : app.get_subcommands()) out << sub->help();
            if (app.get_subcommands().empty()) out << app.help();
            return kOk;
        }
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: usage: " << msg << '\n';
        return kUsage;
    }

    try {
        if (*sample) cmd_sample(so, out);
        else if (*cf) cmd_cf(co, out);
        else if (*bound) cmd_bound(bo, out);
        else if (*choose) cmd_choose(cho, out);
        else if (*dist) cmd_distance(dop, out);
        else if (*infer) cmd_infer(io, out);
        else if (*figs) cmd_figures(fo, out);
        return kOk;
    } catch (const UsageError& e) {
        err << "error: usage: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: domain: " << e.what() << '\n';
        return kDomain;
    } catch (const UnreachableTolerance& e) {
        err << "error: numeric: " << e.what() << " (best c=" << num(e.best_c) << ", bound=" << num(e.best_bound)
            << ")\n";
        return kNumeric;
    } catch (const ConvergenceError& e) {
        err << "error: numeric: " << e.what() << " (achieved " << num(e.achieved) << ")\n";
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: failure: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace stable_psr::cli
