#include "fracstep/operator.hpp"

#include <cmath>
#include <string>

namespace fracstep {

GridSpec GridSpec::make(double T, std::size_t M) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("grid: T must be positive and finite");
    }
    if (M < 1) {
        throw DomainError("grid: M must be at least 1");
    }
    return GridSpec{T, M};
}

Complex caputo_history_sum(const WeightTable& table, std::span<const Complex> u, std::size_t n) {
    const std::size_t k = static_cast<std::size_t>(table.scheme().k);
    if (n < k || n > table.n_max() || n >= u.size()) {
        throw IndexError("discrete Caputo: step " + std::to_string(n) + " outside [" +
                         std::to_string(k) + ", " +
                         std::to_string(std::min(table.n_max(), u.size() - 1)) + "]");
    }
    const auto start = table.starting(n);
    const auto omega = table.omega();
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) {
        sum += start[j] * u[j];
    }
    for (std::size_t j = 0; j <= n; ++j) {
        sum += omega[n - j] * u[j];
    }
    return sum;
}

Complex apply_discrete_caputo(const WeightTable& table, const Trajectory& traj, std::size_t n) {
    const double scale = std::pow(traj.grid.dt(), -table.alpha());
    return scale * caputo_history_sum(table, traj.values, n);
}

}  // namespace fracstep
