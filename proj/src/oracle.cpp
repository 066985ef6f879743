#include "fracstep/oracle.hpp"

#include <cmath>
#include <string>

#include "fracstep/quadrature.hpp"
#include "fracstep/special.hpp"

namespace fracstep {

namespace {

constexpr int kOraclePoints = 30;

// Index of the first node and check that all k+1 nodes exist.
long first_node(std::span<const Complex> samples, long j, int q, int k) {
    const long lo = j + q - k - 1;
    const long hi = j + q - 1;
    if (k < 1 || lo < 0 || hi >= static_cast<long>(samples.size())) {
        throw IndexError("interpolant piece (j=" + std::to_string(j) + ", q=" + std::to_string(q) +
                         ", k=" + std::to_string(k) + ") needs nodes outside the samples");
    }
    return lo;
}

}  // namespace

Complex lagrange_piece_eval(std::span<const Complex> samples, long j, int q, int k, double s) {
    const long lo = first_node(samples, j, q, k);
    // Local coordinate of node m is m - (j-1).
    Complex sum{0.0, 0.0};
    for (long a = lo; a <= lo + k; ++a) {
        double basis = 1.0;
        const double xa = static_cast<double>(a - (j - 1));
        for (long m = lo; m <= lo + k; ++m) {
            if (m != a) {
                const double xm = static_cast<double>(m - (j - 1));
                basis *= (s - xm) / (xa - xm);
            }
        }
        sum += basis * samples[static_cast<std::size_t>(a)];
    }
    return sum;
}

Complex lagrange_piece_deriv(std::span<const Complex> samples, long j, int q, int k, double s) {
    const long lo = first_node(samples, j, q, k);
    Complex sum{0.0, 0.0};
    for (long a = lo; a <= lo + k; ++a) {
        const double xa = static_cast<double>(a - (j - 1));
        double deriv = 0.0;
        for (long l = lo; l <= lo + k; ++l) {
            if (l == a) {
                continue;
            }
            double term = 1.0 / (xa - static_cast<double>(l - (j - 1)));
            for (long m = lo; m <= lo + k; ++m) {
                if (m != a && m != l) {
                    const double xm = static_cast<double>(m - (j - 1));
                    term *= (s - xm) / (xa - xm);
                }
            }
            deriv += term;
        }
        sum += deriv * samples[static_cast<std::size_t>(a)];
    }
    return sum;
}

Complex newton_piece_eval(std::span<const Complex> samples, long j, int q, int k, double s) {
    const long lo = first_node(samples, j, q, k);
    std::vector<Complex> diff(samples.begin() + lo, samples.begin() + lo + k + 1);
    Complex sum{0.0, 0.0};
    double binom = 1.0;  // binom(s-q+r-1, r)
    for (int r = 0; r <= k; ++r) {
        if (r > 0) {
            binom *= (s - q + r - 1) / r;
        }
        sum += binom * diff.back();
        for (std::size_t m = diff.size(); m-- > 1;) {
            diff[m] -= diff[m - 1];
        }
        diff.erase(diff.begin());
    }
    return sum;
}

PiecewiseInterpolant::PiecewiseInterpolant(SchemeId scheme, GridSpec grid,
                                           std::vector<Complex> samples, Variant variant)
    : scheme_(scheme), grid_(grid), samples_(std::move(samples)), variant_(variant) {
    if (!scheme_.valid()) {
        throw DomainError("interpolant: invalid scheme " + to_string(scheme_));
    }
    if (variant_ == Variant::P32 && !(scheme_ == SchemeId{2, 1} || scheme_ == SchemeId{2, 2})) {
        throw DomainError("interpolant: the P32 variant needs k = 2");
    }
    if (samples_.size() != grid_.M + 1) {
        throw IndexError("interpolant: need M+1 samples");
    }
}

std::vector<Piece> PiecewiseInterpolant::layout(std::size_t n) const {
    const int k = scheme_.k;
    const int i = scheme_.i;
    if (n < static_cast<std::size_t>(k) || n > grid_.M) {
        throw IndexError("interpolant: step " + std::to_string(n) + " outside [k, M]");
    }
    const long nn = static_cast<long>(n);
    std::vector<Piece> pieces;
    pieces.reserve(n);
    if (variant_ == Variant::P32) {
        pieces.push_back({1, 2, 2});
        for (long j = 2; j <= nn; ++j) {
            pieces.push_back({j, 1, 2});
        }
        return pieces;
    }
    for (long j = 1; j <= k - i; ++j) {
        pieces.push_back({j, k - static_cast<int>(j), k - 1});
    }
    for (long j = k; j <= nn; ++j) {
        pieces.push_back({j - i + 1, i, k});
    }
    for (long j = nn - i + 2; j <= nn; ++j) {
        pieces.push_back({j, static_cast<int>(nn + 1 - j), k});
    }
    return pieces;
}

Complex PiecewiseInterpolant::piece_value(const Piece& piece, double s) const {
    return lagrange_piece_eval(samples_, piece.j, piece.q, piece.degree, s);
}

Complex PiecewiseInterpolant::piece_deriv(const Piece& piece, double s) const {
    return lagrange_piece_deriv(samples_, piece.j, piece.q, piece.degree, s);
}

Complex oracle_discrete_caputo(const PiecewiseInterpolant& interp, double alpha, std::size_t n) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("oracle: alpha must lie in (0,1)");
    }
    static const QuadratureRule legendre = gauss_legendre(kOraclePoints);
    const QuadratureRule jacobi = gauss_jacobi(kOraclePoints, -alpha, 0.0);

    const double nn = static_cast<double>(n);
    Complex total{0.0, 0.0};
    for (const Piece& piece : interp.layout(n)) {
        const double offset = nn - static_cast<double>(piece.j) + 1.0;  // kernel (offset - s)^-alpha
        Complex panel{0.0, 0.0};
        if (piece.j == static_cast<long>(n)) {
            for (int p = 0; p < kOraclePoints; ++p) {
                panel += jacobi.weights[p] * interp.piece_deriv(piece, jacobi.nodes[p]);
            }
        } else {
            for (int p = 0; p < kOraclePoints; ++p) {
                const double s = legendre.nodes[p];
                panel += legendre.weights[p] * std::pow(offset - s, -alpha) *
                         interp.piece_deriv(piece, s);
            }
        }
        total += panel;
    }
    return total * std::pow(interp.grid().dt(), -alpha) / gamma_real(1.0 - alpha);
}

double caputo_monomial(int m, double alpha, double t) {
    if (m < 0 || !(t >= 0.0)) {
        throw DomainError("caputo_monomial: need m >= 0 and t >= 0");
    }
    if (m == 0 || t == 0.0) {
        return 0.0;
    }
    return std::exp(log_gamma_real(m + 1.0) - log_gamma_real(m + 1.0 - alpha)) *
           std::pow(t, m - alpha);
}

}  // namespace fracstep
