#pragma once

#include <cstddef>
#include <vector>

#include "fracstep/types.hpp"

namespace fracstep {

/// Gamma function for 0 < x <= 50 (Lanczos, g = 7, nine terms; reflection
/// below 1/2). Relative error is a few ulp across the domain.
double gamma_real(double x);

/// log Gamma(x) for x > 0 from the same Lanczos sum. Used where Gamma itself
/// would overflow.
double log_gamma_real(double x);

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) by its power
/// series, with terms formed and summed in double-double arithmetic.
///
/// Requires 0 < alpha <= 2, beta > 0, |z| <= 10. Throws NonConvergence if
/// 400 terms are not enough, which happens for small alpha near |z| = 10.
Complex mittag_leffler(double alpha, double beta, Complex z);

/// Coefficients g_n of (1 - xi)^beta = sum_n g_n xi^n.
struct BinomialCoeffSeq {
    double beta = 0.0;
    std::vector<double> coeffs;
};

/// g_0 = 1, g_n = g_{n-1} (n - 1 - beta) / n for n = 1..n_max. Requires |beta| < 2.
BinomialCoeffSeq binom_series(double beta, std::size_t n_max);

}  // namespace fracstep
