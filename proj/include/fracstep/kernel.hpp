#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracstep {

/// Names one kernel integral
///
///   I_{n,q}^r = 1/Gamma(1-alpha) * int_0^1 (n+1-s)^(-alpha) d binom(s-q+r-1, r),
///
/// with I = 0 for n < 0. Only 1 <= q, r <= 3 occur in the k <= 3 weights.
struct KernelIndex {
    long n = 0;
    int q = 1;
    int r = 1;
};

/// Monomial coefficients c_0..c_{r-1} of d/ds binom(s-q+r-1, r), i.e. of the
/// derivative of (s-q)(s-q+1)...(s-q+r-1)/r!.
std::vector<double> dbinom_poly(int q, int r);

/// Evaluation route for the moments int_0^1 (n+1-s)^(-alpha) s^m ds.
enum class KernelPath {
    Auto,            ///< Beta function at n = 0, antiderivative for n < 8, quadrature beyond
    Antiderivative,  ///< exact antiderivative expansion (n >= 1)
    Quadrature,      ///< 32-point Gauss-Legendre (n >= 1)
};

/// Throws DomainError for alpha outside (0,1) or q, r outside [1,3].
double kernel_integral(KernelIndex idx, double alpha, KernelPath path = KernelPath::Auto);

/// The sequence I_{0,q}^r .. I_{N,q}^r with the n < 0 convention applied on access.
class KernelTable {
public:
    KernelTable(double alpha, int q, int r, std::vector<double> values)
        : alpha_(alpha), q_(q), r_(r), values_(std::move(values)) {}

    double alpha() const noexcept { return alpha_; }
    int q() const noexcept { return q_; }
    int r() const noexcept { return r_; }
    std::size_t n_max() const noexcept { return values_.size() - 1; }
    std::span<const double> values() const noexcept { return values_; }

    /// I_n, zero for n < 0. Throws IndexError past n_max.
    double operator()(long n) const;

    /// Backward difference nabla^order I_n, reading zeros for negative indices.
    double nabla(long n, int order) const;

private:
    double alpha_;
    int q_;
    int r_;
    std::vector<double> values_;
};

KernelTable kernel_table(double alpha, int q, int r, std::size_t n_max);

/// out[n] = nabla^order seq[n] for every n, entries before index 0 read as zero.
/// Throws IndexError if order exceeds the sequence length.
std::vector<double> backward_diff(std::span<const double> seq, int order);

}  // namespace fracstep
