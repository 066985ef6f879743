#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracstep/types.hpp"
#include "fracstep/weights.hpp"

namespace fracstep {

/// Uniform grid t_n = n T / M on [0, T].
struct GridSpec {
    double T = 1.0;
    std::size_t M = 1;

    /// Throws DomainError unless T > 0 and M >= 1.
    static GridSpec make(double T, std::size_t M);

    double dt() const noexcept { return T / static_cast<double>(M); }
    double t(std::size_t n) const noexcept {
        return T * static_cast<double>(n) / static_cast<double>(M);
    }
};

/// Grid values u_0..u_M.
struct Trajectory {
    GridSpec grid;
    std::vector<Complex> values;

    /// Samples f at every grid node.
    template <typename F>
    static Trajectory sample(const GridSpec& grid, F&& f) {
        Trajectory out{grid, {}};
        out.values.reserve(grid.M + 1);
        for (std::size_t n = 0; n <= grid.M; ++n) {
            out.values.push_back(Complex(f(grid.t(n))));
        }
        return out;
    }
};

/// Bracketed sum sum_{j<k} w_{n,j} u_j + sum_{j<=n} omega_{n-j} u_j, without the
/// dt^(-alpha) factor. Requires k <= n <= table.n_max() and n < u.size().
Complex caputo_history_sum(const WeightTable& table, std::span<const Complex> u, std::size_t n);

/// D_{k,i}^alpha u_n. Throws IndexError when n is outside [k, min(M, n_max)].
Complex apply_discrete_caputo(const WeightTable& table, const Trajectory& traj, std::size_t n);

}  // namespace fracstep
