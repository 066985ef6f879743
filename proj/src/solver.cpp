#include "fracstep/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracstep/weights.hpp"

namespace fracstep {

Complex ProblemSpec::eval_rhs(double t, Complex u) const {
    if (const auto* lin = std::get_if<LinearRhs>(&rhs)) {
        return lin->lambda * u + lin->forcing(t);
    }
    return std::get<GeneralRhs>(rhs).f(t, u);
}

void ProblemSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("problem: alpha must lie in (0,1)");
    }
    require_finite(u0, "problem: u0");
    if (const auto* lin = std::get_if<LinearRhs>(&rhs)) {
        require_finite(lin->lambda, "problem: lambda");
        if (!lin->forcing) {
            throw DomainError("problem: linear rhs without forcing");
        }
    } else if (!std::get<GeneralRhs>(rhs).f) {
        throw DomainError("problem: empty rhs");
    }
    if (exact) {
        const Complex e0 = exact(0.0);
        if (std::abs(e0 - u0) > 1e-12 * std::max(1.0, std::abs(u0))) {
            throw DomainError("problem: exact(0) differs from u0");
        }
    }
}

void NewtonConfig::validate() const {
    if (!(tol > 0.0) || max_iter < 1 || !(fd_step_scale > 0.0)) {
        throw DomainError("newton: need tol > 0, max_iter >= 1, fd_step_scale > 0");
    }
}

double SolveReport::final_error() const {
    if (blowup || errors.empty()) {
        return max_abs_u;
    }
    return errors.back();
}

namespace {

struct Stepper {
    const ProblemSpec& problem;
    const WeightTable& table;
    const GridSpec& grid;
    const NewtonConfig& newton;
    bool force_newton;
    double scale;  // dt^alpha

    // sum_{j<k} w_{n,j} u_j + sum_{j<n} omega_{n-j} u_j
    Complex history(std::span<const Complex> u, std::size_t n) const {
        const std::size_t k = static_cast<std::size_t>(table.scheme().k);
        const auto start = table.starting(n);
        const auto omega = table.omega();
        Complex h{0.0, 0.0};
        for (std::size_t j = 0; j < k; ++j) {
            h += start[j] * u[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            h += omega[n - j] * u[j];
        }
        return h;
    }

    // Returns (u_n, newton iterations).
    std::pair<Complex, std::size_t> step(std::size_t n, Complex h, Complex guess) const {
        const double t = grid.t(n);
        const double w0 = table.omega(0);
        const auto* lin = std::get_if<LinearRhs>(&problem.rhs);
        if (lin && !force_newton) {
            const Complex pivot = w0 - scale * lin->lambda;
            if (std::abs(pivot) < 1e-14 * std::abs(w0)) {
                throw PivotBreakdown(n, std::abs(pivot));
            }
            return {(scale * lin->forcing(t) - h) / pivot, 0};
        }
        return newton_solve(n, t, h, guess);
    }

    std::pair<Complex, std::size_t> newton_solve(std::size_t n, double t, Complex h,
                                                 Complex u) const {
        const double w0 = table.omega(0);
        const auto residual = [&](Complex v) { return w0 * v - scale * problem.eval_rhs(t, v) + h; };
        std::function<Complex(double, Complex)> dfdu;
        if (const auto* lin = std::get_if<LinearRhs>(&problem.rhs)) {
            const Complex lambda = lin->lambda;
            dfdu = [lambda](double, Complex) { return lambda; };
        } else {
            dfdu = std::get<GeneralRhs>(problem.rhs).df_du;
        }

        Complex r = residual(u);
        for (std::size_t iter = 1; iter <= newton.max_iter; ++iter) {
            Complex du;
            if (dfdu) {
                const Complex jac = w0 - scale * dfdu(t, u);
                if (std::abs(jac) < 1e-14 * std::abs(w0)) {
                    throw PivotBreakdown(n, std::abs(jac));
                }
                du = -r / jac;
            } else {
                // Real 2x2 Jacobian of the residual by one-sided differences.
                const double hstep = newton.fd_step_scale * (1.0 + std::abs(u));
                const Complex jr = (residual(u + Complex(hstep, 0.0)) - r) / hstep;
                const Complex ji = (residual(u + Complex(0.0, hstep)) - r) / hstep;
                const double det = jr.real() * ji.imag() - ji.real() * jr.imag();
                if (!(std::abs(det) >= 1e-28 * w0 * w0)) {
                    throw PivotBreakdown(n, std::sqrt(std::abs(det)));
                }
                const double dx = (-r.real() * ji.imag() + ji.real() * r.imag()) / det;
                const double dy = (-jr.real() * r.imag() + jr.imag() * r.real()) / det;
                du = Complex(dx, dy);
            }
            u += du;
            r = residual(u);
            if (!std::isfinite(std::abs(u)) || !std::isfinite(std::abs(r))) {
                throw NewtonDiverged(n, std::abs(r));
            }
            if (std::abs(du) <= newton.tol * (1.0 + std::abs(u)) || std::abs(r) <= newton.tol) {
                return {u, iter};
            }
        }
        throw NewtonDiverged(n, std::abs(r));
    }
};

// Advances the trajectory from index `first` to grid.M; returns false on blowup.
bool march(const Stepper& st, std::vector<Complex>& u, std::size_t first, SolveReport& report) {
    for (std::size_t n = first; n <= st.grid.M; ++n) {
        const Complex h = st.history(u, n);
        const auto [un, iters] = st.step(n, h, u[n - 1]);
        u.push_back(un);
        report.newton_iters.push_back(iters);
        const double mag = std::abs(un);
        if (!std::isfinite(mag) || mag > kBlowupThreshold) {
            report.max_abs_u = std::isfinite(mag) ? std::max(report.max_abs_u, mag) : mag;
            report.blowup = true;
            report.blowup_step = n;
            return false;
        }
        report.max_abs_u = std::max(report.max_abs_u, mag);
    }
    return true;
}

void check_grid(SchemeId scheme, const GridSpec& grid) {
    if (!scheme.valid()) {
        throw DomainError("solve: invalid scheme " + to_string(scheme));
    }
    GridSpec::make(grid.T, grid.M);
    if (grid.M < static_cast<std::size_t>(scheme.k)) {
        throw DomainError("solve: need M >= k");
    }
}

}  // namespace

std::vector<Complex> bootstrap_starts(const ProblemSpec& problem, SchemeId scheme,
                                      const GridSpec& grid, const NewtonConfig& newton) {
    problem.validate();
    newton.validate();
    check_grid(scheme, grid);
    if (scheme.k == 1) {
        return {};
    }
    const std::size_t need = static_cast<std::size_t>(scheme.k) - 1;
    const GridSpec prefix{grid.t(need), need};
    const auto table = cached_weight_table(SchemeId{1, 1}, problem.alpha, need);
    const Stepper st{problem, *table, prefix, newton, false, std::pow(grid.dt(), problem.alpha)};
    std::vector<Complex> u{problem.u0};
    SolveReport scratch;
    if (!march(st, u, 1, scratch)) {
        throw DomainError("bootstrap: starting values overflowed");
    }
    return {u.begin() + 1, u.end()};
}

SolveReport solve(const ProblemSpec& problem, SchemeId scheme, const GridSpec& grid,
                  const SolveOptions& options) {
    problem.validate();
    options.newton.validate();
    check_grid(scheme, grid);
    if (options.starting == StartMode::Exact && !problem.has_exact()) {
        throw DomainError("solve: exact starting values need an exact solution");
    }

    const std::size_t k = static_cast<std::size_t>(scheme.k);
    std::vector<Complex> u;
    u.reserve(grid.M + 1);
    u.push_back(problem.u0);
    if (options.starting == StartMode::Exact) {
        for (std::size_t j = 1; j < k; ++j) {
            u.push_back(problem.exact(grid.t(j)));
        }
    } else {
        const auto starts = bootstrap_starts(problem, scheme, grid, options.newton);
        u.insert(u.end(), starts.begin(), starts.end());
    }

    SolveReport report;
    report.newton_iters.assign(k, 0);
    for (const Complex& v : u) {
        report.max_abs_u = std::max(report.max_abs_u, std::abs(v));
    }

    const auto table = cached_weight_table(scheme, problem.alpha, grid.M);
    const Stepper st{problem, *table, grid, options.newton, options.force_newton,
                     std::pow(grid.dt(), problem.alpha)};
    march(st, u, k, report);

    if (problem.has_exact()) {
        report.errors.reserve(u.size());
        for (std::size_t n = 0; n < u.size(); ++n) {
            report.errors.push_back(std::abs(problem.exact(grid.t(n)) - u[n]));
        }
    }
    report.trajectory = Trajectory{grid, std::move(u)};
    return report;
}

}  // namespace fracstep
