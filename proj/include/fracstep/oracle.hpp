#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracstep/operator.hpp"
#include "fracstep/types.hpp"

namespace fracstep {

/// Lagrange polynomial p_{j,q}^k through nodes j+q-k-1 .. j+q-1, evaluated at
/// t_{j-1} + s dt. Throws IndexError when a node lies outside the samples.
Complex lagrange_piece_eval(std::span<const Complex> samples, long j, int q, int k, double s);

/// d/ds of the same polynomial.
Complex lagrange_piece_deriv(std::span<const Complex> samples, long j, int q, int k, double s);

/// The same polynomial in backward-difference form
///   sum_{r<=k} binom(s-q+r-1, r) nabla^r u_{j+q-1}.
Complex newton_piece_eval(std::span<const Complex> samples, long j, int q, int k, double s);

/// Polynomial used on one subinterval I_j = [t_{j-1}, t_j].
struct Piece {
    long j = 1;
    int q = 1;
    int degree = 1;
};

/// Continuous piecewise interpolant P_i^k of the samples, as seen from an
/// evaluation point in (t_{n-1}, t_n].
class PiecewiseInterpolant {
public:
    enum class Variant {
        Standard,  ///< the layout of scheme (k,i)
        P32,       ///< k = 2 alternative p_{1,2}^2 + sum_{j>=2} p_{j,1}^2 (no weight list)
    };

    PiecewiseInterpolant(SchemeId scheme, GridSpec grid, std::vector<Complex> samples,
                         Variant variant = Variant::Standard);

    SchemeId scheme() const noexcept { return scheme_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const Complex> samples() const noexcept { return samples_; }

    /// Pieces on I_1..I_n; requires k <= n <= M.
    std::vector<Piece> layout(std::size_t n) const;

    Complex piece_value(const Piece& piece, double s) const;
    Complex piece_deriv(const Piece& piece, double s) const;

private:
    SchemeId scheme_;
    GridSpec grid_;
    std::vector<Complex> samples_;
    Variant variant_;
};

/// Caputo derivative of the interpolant at t_n by panel-wise quadrature:
/// 30-point Gauss-Jacobi on the singular last panel, 30-point Gauss-Legendre
/// elsewhere.
Complex oracle_discrete_caputo(const PiecewiseInterpolant& interp, double alpha, std::size_t n);

/// Caputo derivative of t^m: Gamma(m+1)/Gamma(m+1-alpha) t^(m-alpha); zero for m = 0.
double caputo_monomial(int m, double alpha, double t);

}  // namespace fracstep
