#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracstep/types.hpp"

namespace fracstep {

/// Convolution weights omega_0..omega_{n_max} of scheme (k,i) at order alpha.
std::vector<double> convolution_weights(SchemeId scheme, double alpha, std::size_t n_max);

/// Starting weights (w_{n,0}, ..., w_{n,k-1}) for step n >= k.
std::vector<double> starting_weights(SchemeId scheme, double alpha, std::size_t n);

/// Weights of the discrete operator
///
///   D u_n = dt^(-alpha) [ sum_{j<k} w_{n,j} u_j + sum_{j<=n} omega_{n-j} u_j ],
///
/// for steps k <= n <= n_max. Immutable after construction; the constructor
/// checks that every row annihilates constants.
class WeightTable {
public:
    WeightTable(SchemeId scheme, double alpha, std::vector<double> omega,
                std::vector<std::vector<double>> starting);

    SchemeId scheme() const noexcept { return scheme_; }
    double alpha() const noexcept { return alpha_; }
    std::size_t n_max() const noexcept { return omega_.size() - 1; }

    std::span<const double> omega() const noexcept { return omega_; }
    double omega(std::size_t n) const;

    /// Row (w_{n,0}, ..., w_{n,k-1}); IndexError unless k <= n <= n_max.
    std::span<const double> starting(std::size_t n) const;

    /// sum_j w_{n,j} + sum_{j<=n} omega_j, zero up to rounding.
    double consistency_residual(std::size_t n) const;
    double max_consistency_residual() const;

    /// sum_n |omega_n|, the l1 norm monitored for boundedness.
    double omega_abs_sum() const;

private:
    SchemeId scheme_;
    double alpha_;
    std::vector<double> omega_;
    std::vector<std::vector<double>> starting_;  // row n - k
};

/// Builds the table directly. Throws ConsistencyError when a row misses the
/// sum-to-zero identity by more than 1e-10.
WeightTable weight_table(SchemeId scheme, double alpha, std::size_t n_max);

/// Shared, memoised table keyed by (scheme, bit pattern of alpha, n_max).
/// Safe to call from several threads.
std::shared_ptr<const WeightTable> cached_weight_table(SchemeId scheme, double alpha,
                                                       std::size_t n_max);

}  // namespace fracstep
