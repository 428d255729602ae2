#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stable_psr/bounds.hpp"
#include "stable_psr/charfns.hpp"
#include "stable_psr/distance.hpp"
#include "stable_psr/errors.hpp"
#include "stable_psr/psr_engine.hpp"
#include "stable_psr/special_fn.hpp"
#include "stable_psr/stable_core.hpp"

namespace py = pybind11;
using namespace stable_psr;

namespace {

py::array_t<double> to_array(std::vector<double> v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

PsrConfig config(double alpha, double mu_w, double sigma_w, double c, std::optional<double> d) {
    PsrConfig cfg{alpha, {mu_w, sigma_w}, c, d};
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_stable_psr, m) {
    m.doc() = "Poisson series representation of alpha-stable laws";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
    py::register_exception<UnreachableTolerance>(m, "UnreachableTolerance", PyExc_ArithmeticError);

    m.def("lower_inc_gamma", &lower_inc_gamma, py::arg("s"), py::arg("x"));
    m.def("upper_inc_gamma", &upper_inc_gamma, py::arg("s"), py::arg("x"));
    m.def("c_alpha", &c_alpha_const, py::arg("alpha"));

    m.def(
        "map_w_to_stable",
        [](double alpha, double mu_w, double sigma_w) {
            auto p = map_w_to_stable(alpha, {mu_w, sigma_w});
            return py::dict(py::arg("alpha") = p.alpha, py::arg("sigma") = p.sigma, py::arg("beta") = p.beta,
                            py::arg("mu") = p.mu);
        },
        py::arg("alpha"), py::arg("mu_w") = 0.0, py::arg("sigma_w") = 1.0);

    m.def(
        "stable_log_cf",
        [](double alpha, double sigma, double beta, double mu, double s) {
            return stable_log_cf({alpha, sigma, beta, mu}, s);
        },
        py::arg("alpha"), py::arg("sigma"), py::arg("beta"), py::arg("mu"), py::arg("s"));

    m.def(
        "cms_sample",
        [](double alpha, double sigma, double beta, double mu, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return to_array(cms_sample({alpha, sigma, beta, mu}, rng, n));
        },
        py::arg("alpha"), py::arg("sigma") = 1.0, py::arg("beta") = 0.0, py::arg("mu") = 0.0, py::arg("n") = 1000,
        py::arg("seed") = 1);

    m.def(
        "sample",
        [](const std::string& method, double alpha, double mu_w, double sigma_w, double c, std::optional<double> d,
           std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            if (method == "x0c") return to_array(sample_x0c_n(config(alpha, mu_w, sigma_w, c, std::nullopt), rng, n));
            if (method == "xhat") return to_array(sample_x_hat_n(config(alpha, mu_w, sigma_w, c, std::nullopt), rng, n));
            if (method == "residual")
                return to_array(sample_residual_n(config(alpha, mu_w, sigma_w, c, d.value_or(default_far_truncation(c))), rng, n));
            throw DomainError("method must be x0c, xhat or residual");
        },
        py::arg("method"), py::arg("alpha"), py::arg("mu_w") = 0.0, py::arg("sigma_w") = 1.0, py::arg("c") = 10.0,
        py::arg("d") = py::none(), py::arg("n") = 1000, py::arg("seed") = 1);

    m.def(
        "residual_moments",
        [](double alpha, double mu_w, double sigma_w, double c, std::optional<double> d) {
            auto r = residual_moments(config(alpha, mu_w, sigma_w, c, d));
            return py::make_tuple(r.mean, r.var);
        },
        py::arg("alpha"), py::arg("mu_w") = 0.0, py::arg("sigma_w") = 1.0, py::arg("c") = 10.0, py::arg("d") = py::none());

    m.def("g", &g_fn, py::arg("alpha"), py::arg("w"));
    m.def("q", &q_fn, py::arg("alpha"), py::arg("u"));
    m.def(
        "log_cf_z_series",
        [](double alpha, double mu_w, double sigma_w, double c, double s, int k_max) {
            return log_cf_Z_series(alpha, {mu_w, sigma_w}, c, s, k_max).value;
        },
        py::arg("alpha"), py::arg("mu_w"), py::arg("sigma_w"), py::arg("c"), py::arg("s"), py::arg("k_max") = 200);
    m.def(
        "log_cf_r_integral",
        [](double alpha, double mu_w, double sigma_w, double c, double s, std::optional<double> d) {
            return log_cf_R_integral(alpha, {mu_w, sigma_w}, c, d, s);
        },
        py::arg("alpha"), py::arg("mu_w"), py::arg("sigma_w"), py::arg("c"), py::arg("s"), py::arg("d") = py::none());
    m.def("log_cf_z_closed", &log_cf_Z_closed, py::arg("alpha"), py::arg("c"), py::arg("w"));
    m.def("log_cf_x0c", &log_cf_X0c_closed, py::arg("alpha"), py::arg("c"), py::arg("u"));
    m.def("log_cf_x_hat", &log_cf_x_hat, py::arg("alpha"), py::arg("c"), py::arg("u"));

    m.def(
        "bound",
        [](const std::string& name, double alpha, double c, int n_envelope) {
            auto r = bound_by_name(name, alpha, c, n_envelope);
            return py::make_tuple(r.value, r.terms);
        },
        py::arg("name"), py::arg("alpha"), py::arg("c"), py::arg("n_envelope") = 10);
    m.def("c_of_alpha", &c_of_alpha, py::arg("alpha"));
    m.def(
        "choose_c",
        [](double alpha, double epsilon, const std::string& bound, int n_envelope) {
            auto r = choose_c(alpha, epsilon, bound, n_envelope);
            return py::make_tuple(r.c, r.bound);
        },
        py::arg("alpha"), py::arg("epsilon"), py::arg("bound") = "b5", py::arg("n_envelope") = 10);

    m.def(
        "esseen",
        [](const std::string& pair, double alpha, double c, std::optional<double> theta) {
            auto e = esseen_bound(parse_cf_pair(pair), alpha, c, theta.value_or(std::numeric_limits<double>::infinity()));
            return py::make_tuple(e.value, e.abs_err);
        },
        py::arg("pair"), py::arg("alpha"), py::arg("c"), py::arg("theta") = py::none());
}
