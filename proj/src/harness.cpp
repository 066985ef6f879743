#include "fracstep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "fracstep/csv.hpp"
#include "fracstep/operator.hpp"
#include "fracstep/oracle.hpp"
#include "fracstep/special.hpp"
#include "fracstep/weights.hpp"

namespace fracstep {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("problem: alpha must lie in (0,1)");
    }
}

// Caputo derivative of e^{mu t}: mu t^{1-alpha} E_{1,2-alpha}(mu t).
Complex caputo_exp(double alpha, Complex mu, double t) {
    if (t == 0.0) {
        return {0.0, 0.0};
    }
    return mu * std::pow(t, 1.0 - alpha) * mittag_leffler(1.0, 2.0 - alpha, mu * t);
}

}  // namespace

ProblemSpec mlf_decay(double alpha) {
    check_alpha(alpha);
    ProblemSpec p;
    p.alpha = alpha;
    p.u0 = 1.0;
    const auto exact = [alpha](double t) {
        return mittag_leffler(alpha, 1.0, Complex(-std::pow(t, alpha), 0.0));
    };
    p.rhs = LinearRhs{Complex{0.0, 0.0}, [exact](double t) { return -exact(t); }};
    p.exact = exact;
    return p;
}

ProblemSpec linear_complex(double alpha, Complex lambda) {
    check_alpha(alpha);
    require_finite(lambda, "linear_complex: lambda");
    ProblemSpec p;
    p.alpha = alpha;
    p.u0 = 1.0;
    p.rhs = LinearRhs{lambda, [alpha, lambda](double t) {
                          return caputo_exp(alpha, -1.0, t) - lambda * std::exp(-t);
                      }};
    p.exact = [](double t) { return Complex(std::exp(-t), 0.0); };
    return p;
}

ProblemSpec nonlinear_square(double alpha, Complex mu) {
    check_alpha(alpha);
    require_finite(mu, "nonlinear_square: mu");
    ProblemSpec p;
    p.alpha = alpha;
    p.u0 = 1.0;
    GeneralRhs rhs;
    rhs.f = [alpha, mu](double t, Complex u) {
        return -u * u + caputo_exp(alpha, mu, t) + std::exp(2.0 * mu * t);
    };
    rhs.df_du = [](double, Complex u) { return -2.0 * u; };
    p.rhs = std::move(rhs);
    p.exact = [mu](double t) { return std::exp(mu * t); };
    return p;
}

Complex rotated_lambda(double modulus, double phase, double alpha) {
    return std::polar(modulus, std::numbers::pi * alpha * phase);
}

std::vector<ConvergenceRow> run_convergence(const ProblemFactory& problem,
                                            const ConvergenceSetup& setup) {
    for (std::size_t m = 1; m < setup.M_list.size(); ++m) {
        if (setup.M_list[m] <= setup.M_list[m - 1]) {
            throw DomainError("run_convergence: M_list must be strictly increasing");
        }
    }
    struct Job {
        SchemeId scheme;
        double alpha;
        std::size_t M;
    };
    std::vector<Job> jobs;
    for (SchemeId s : setup.schemes) {
        for (double a : setup.alphas) {
            for (std::size_t M : setup.M_list) {
                jobs.push_back({s, a, M});
            }
        }
    }
    // Heavy solves first keeps the tail of the pool short.
    std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.M > b.M; });

    std::vector<ConvergenceRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) {
                return;
            }
            const Job& job = jobs[idx];
            try {
                const ProblemSpec spec = problem(job.alpha);
                const auto report =
                    solve(spec, job.scheme, GridSpec::make(setup.T, job.M), setup.options);
                rows[idx] = ConvergenceRow{job.alpha, job.scheme, job.M, report.final_error(),
                                           std::nullopt, report.blowup};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                next.store(jobs.size());
            }
        }
    };

    unsigned threads = setup.threads ? setup.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    std::sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
        return std::tie(a.scheme, a.alpha, a.M) < std::tie(b.scheme, b.alpha, b.M);
    });
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& prev = rows[r - 1];
        auto& row = rows[r];
        if (prev.scheme == row.scheme && prev.alpha == row.alpha && !prev.blowup && !row.blowup &&
            prev.abs_err > 0.0 && row.abs_err > 0.0) {
            row.rate = std::log(prev.abs_err / row.abs_err) /
                       std::log(static_cast<double>(row.M) / static_cast<double>(prev.M));
        }
    }
    return rows;
}

double fitted_slope(const std::vector<double>& M, const std::vector<double>& err) {
    if (M.size() != err.size() || M.size() < 2) {
        throw DomainError("fitted_slope: need at least two matching points");
    }
    const double n = static_cast<double>(M.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < M.size(); ++k) {
        if (!(M[k] > 0.0) || !(err[k] > 0.0)) {
            throw DomainError("fitted_slope: values must be positive");
        }
        const double x = std::log(M[k]);
        const double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TruncationStudy run_truncation_study(SchemeId scheme, double alpha, int degree,
                                     const std::vector<std::size_t>& M_list) {
    if (!scheme.valid()) {
        throw DomainError("truncation: invalid scheme " + to_string(scheme));
    }
    if (degree < 1) {
        throw DomainError("truncation: degree must be at least 1");
    }
    if (M_list.size() < 2) {
        throw DomainError("truncation: need at least two grids");
    }
    const std::size_t k = static_cast<std::size_t>(scheme.k);
    TruncationStudy study{scheme, alpha, degree, {}, 0.0, 0.0, 0.0};
    for (std::size_t M : M_list) {
        if (M < 2 * k) {
            throw DomainError("truncation: every M must be at least 2k");
        }
        const GridSpec grid = GridSpec::make(1.0, M);
        const auto traj =
            Trajectory::sample(grid, [degree](double t) { return std::pow(t, degree); });
        const auto table = cached_weight_table(scheme, alpha, M);
        TruncationSample sample{M, 0.0, 0.0, 0.0};
        for (std::size_t n = k; n <= M; ++n) {
            const double tau = std::abs(apply_discrete_caputo(*table, traj, n) -
                                        caputo_monomial(degree, alpha, grid.t(n)));
            sample.max_tau = std::max(sample.max_tau, tau);
            if (n <= 2 * k) {
                sample.head_tau = std::max(sample.head_tau, tau);
            }
            if (2 * n >= M) {
                sample.tail_tau = std::max(sample.tail_tau, tau);
            }
        }
        study.samples.push_back(sample);
    }
    std::vector<double> ms, all, head, tail;
    for (const auto& s : study.samples) {
        ms.push_back(static_cast<double>(s.M));
        all.push_back(s.max_tau);
        head.push_back(s.head_tau);
        tail.push_back(s.tail_tau);
    }
    study.order = -fitted_slope(ms, all);
    study.head_order = -fitted_slope(ms, head);
    study.tail_order = -fitted_slope(ms, tail);
    return study;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    csv::Writer w({"alpha", "k", "i", "M", "abs_err", "rate"});
    for (const auto& r : rows) {
        w.cell(r.alpha).cell(static_cast<long long>(r.scheme.k)).cell(static_cast<long long>(r.scheme.i));
        w.cell(static_cast<long long>(r.M)).cell(r.abs_err);
        if (r.rate) {
            w.cell(*r.rate);
        } else {
            w.empty();
        }
        w.end_row();
    }
    return w.text();
}

}  // namespace fracstep
