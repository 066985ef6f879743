#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "fracstep/operator.hpp"
#include "fracstep/types.hpp"

namespace fracstep {

/// f(t,u) = lambda u + g(t); solved in closed form at each step.
struct LinearRhs {
    Complex lambda{0.0, 0.0};
    std::function<Complex(double)> forcing;
};

/// General f(t,u), with an optional analytic df/du.
struct GeneralRhs {
    std::function<Complex(double, Complex)> f;
    std::function<Complex(double, Complex)> df_du;
};

/// The initial value problem  D^alpha u = f(t,u),  u(0) = u0.
struct ProblemSpec {
    double alpha = 0.5;
    Complex u0{1.0, 0.0};
    std::variant<LinearRhs, GeneralRhs> rhs;
    std::function<Complex(double)> exact;  ///< empty when unknown

    bool has_exact() const noexcept { return static_cast<bool>(exact); }
    Complex eval_rhs(double t, Complex u) const;

    /// Throws DomainError on an empty rhs, alpha outside (0,1), or an exact
    /// solution that misses u0 by more than 1e-12.
    void validate() const;
};

struct NewtonConfig {
    double tol = 1e-13;
    std::size_t max_iter = 50;
    double fd_step_scale = 1.5e-8;

    void validate() const;
};

enum class StartMode { Exact, Bootstrap };

struct SolveOptions {
    StartMode starting = StartMode::Exact;
    NewtonConfig newton{};
    /// Route linear problems through Newton as well.
    bool force_newton = false;
};

struct SolveReport {
    Trajectory trajectory;
    std::vector<std::size_t> newton_iters;  ///< per step, zero for closed-form steps
    double max_abs_u = 0.0;
    /// Set when |u_n| exceeded 1e30 or became non-finite; the trajectory then
    /// ends at the offending step.
    bool blowup = false;
    std::optional<std::size_t> blowup_step;
    std::vector<double> errors;  ///< |u(t_n) - u_n|, empty without an exact solution

    /// |e_M| at the final node, or max_abs_u for a blown-up run.
    double final_error() const;
};

inline constexpr double kBlowupThreshold = 1e30;

/// Steps D_{k,i} u_n = f(t_n, u_n) for n = k..M.
/// Throws NewtonDiverged, PivotBreakdown, DomainError.
SolveReport solve(const ProblemSpec& problem, SchemeId scheme, const GridSpec& grid,
                  const SolveOptions& options = {});

/// u_1..u_{k-1} from scheme (1,1) on the same grid.
std::vector<Complex> bootstrap_starts(const ProblemSpec& problem, SchemeId scheme,
                                      const GridSpec& grid, const NewtonConfig& newton = {});

}  // namespace fracstep
