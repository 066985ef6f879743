#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracstep/solver.hpp"
#include "fracstep/types.hpp"

namespace fracstep {

/// D^alpha u = -E_{alpha,1}(-t^alpha) with exact solution E_{alpha,1}(-t^alpha),
/// posed as a pure forcing term (lambda = 0).
ProblemSpec mlf_decay(double alpha);

/// D^alpha u = lambda u + f(t) with exact solution e^{-t}.
ProblemSpec linear_complex(double alpha, Complex lambda);

/// D^alpha u = -u^2 + f(t) with exact solution e^{mu t}.
ProblemSpec nonlinear_square(double alpha, Complex mu);

/// lambda = modulus * e^{i pi alpha phase}, the parametrisation of the complex
/// test rows.
Complex rotated_lambda(double modulus, double phase, double alpha);

struct ConvergenceRow {
    double alpha = 0.0;
    SchemeId scheme;
    std::size_t M = 0;
    double abs_err = 0.0;        ///< |e_M|, or max |u_n| for a blown-up run
    std::optional<double> rate;  ///< log2(err_{M/2} / err_M) style observed order
    bool blowup = false;
};

using ProblemFactory = std::function<ProblemSpec(double alpha)>;

struct ConvergenceSetup {
    std::vector<SchemeId> schemes;
    std::vector<double> alphas;
    std::vector<std::size_t> M_list;  ///< strictly increasing
    double T = 1.0;
    SolveOptions options{};
    unsigned threads = 0;             ///< 0 selects hardware concurrency
};

/// One solve per (scheme, alpha, M); rows sorted by (scheme, alpha, M).
std::vector<ConvergenceRow> run_convergence(const ProblemFactory& problem,
                                            const ConvergenceSetup& setup);

struct TruncationSample {
    std::size_t M = 0;
    double max_tau = 0.0;   ///< max over k <= n <= M
    double head_tau = 0.0;  ///< max over k <= n <= 2k
    double tail_tau = 0.0;  ///< max over M/2 <= n <= M
};

struct TruncationStudy {
    SchemeId scheme;
    double alpha = 0.0;
    int degree = 0;
    std::vector<TruncationSample> samples;
    double order = 0.0;       ///< fitted decay rate of max_tau
    double head_order = 0.0;
    double tail_order = 0.0;
};

/// tau_n = D_{k,i} u(t_n) - D^alpha u(t_n) for u = t^degree on [0,1].
TruncationStudy run_truncation_study(SchemeId scheme, double alpha, int degree,
                                     const std::vector<std::size_t>& M_list);

/// Least-squares slope of log(err) against log(M).
double fitted_slope(const std::vector<double>& M, const std::vector<double>& err);

/// CSV with header alpha,k,i,M,abs_err,rate.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace fracstep
