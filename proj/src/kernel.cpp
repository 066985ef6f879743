#include "fracstep/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fracstep/error.hpp"
#include "fracstep/special.hpp"

namespace fracstep {

namespace {

constexpr int kGaussPoints = 32;
constexpr long kQuadratureFrom = 8;

struct GaussRule {
    std::array<double, kGaussPoints> nodes{};    // on [0,1]
    std::array<double, kGaussPoints> weights{};  // sum to 1
};

// Legendre roots by Newton iteration on the three-term recurrence.
GaussRule make_gauss_legendre() {
    GaussRule rule;
    constexpr int n = kGaussPoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_legendre();
    return rule;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("kernel: alpha must lie in (0,1)");
    }
}

void check_qr(int q, int r) {
    if (q < 1 || q > 3 || r < 1 || r > 3) {
        throw DomainError("kernel: q and r must lie in [1,3], got q=" + std::to_string(q) +
                          " r=" + std::to_string(r));
    }
}

// Moments K_m(n) = 1/Gamma(1-alpha) int_0^1 (n+1-s)^(-alpha) s^m ds, m = 0..2.
std::array<double, 3> scaled_moments(long n, double alpha, KernelPath path) {
    std::array<double, 3> k{};
    if (n == 0) {
        // Beta integrals: m! Gamma(1-alpha) / Gamma(m+2-alpha).
        double fact = 1.0;
        for (int m = 0; m < 3; ++m) {
            if (m > 0) {
                fact *= m;
            }
            k[m] = fact / gamma_real(m + 2.0 - alpha);
        }
        return k;
    }
    const double inv_gamma = 1.0 / gamma_real(1.0 - alpha);
    if (path == KernelPath::Auto) {
        path = n < kQuadratureFrom ? KernelPath::Antiderivative : KernelPath::Quadrature;
    }
    const double a = static_cast<double>(n) + 1.0;
    if (path == KernelPath::Antiderivative) {
        // Substitute x = n+1-s: s^m = sum_j binom(m,j) a^(m-j) (-x)^j.
        const double b = static_cast<double>(n);
        std::array<double, 3> prim{};
        for (int j = 0; j < 3; ++j) {
            const double e = j + 1.0 - alpha;
            prim[j] = (std::pow(a, e) - std::pow(b, e)) / e;
        }
        k[0] = prim[0];
        k[1] = a * prim[0] - prim[1];
        k[2] = a * a * prim[0] - 2.0 * a * prim[1] + prim[2];
    } else {
        const auto& rule = gauss_rule();
        for (int p = 0; p < kGaussPoints; ++p) {
            const double s = rule.nodes[p];
            const double w = rule.weights[p] * std::pow(a - s, -alpha);
            k[0] += w;
            k[1] += w * s;
            k[2] += w * s * s;
        }
    }
    for (double& v : k) {
        v *= inv_gamma;
    }
    return k;
}

}  // namespace

std::vector<double> dbinom_poly(int q, int r) {
    check_qr(q, r);
    // Expand prod_{m=0}^{r-1} (s - q + m) in monomials.
    std::vector<double> prod{1.0};
    for (int m = 0; m < r; ++m) {
        const double root = static_cast<double>(m - q);
        std::vector<double> next(prod.size() + 1, 0.0);
        for (std::size_t d = 0; d < prod.size(); ++d) {
            next[d] += prod[d] * root;
            next[d + 1] += prod[d];
        }
        prod = std::move(next);
    }
    double factorial = 1.0;
    for (int m = 2; m <= r; ++m) {
        factorial *= m;
    }
    std::vector<double> deriv(static_cast<std::size_t>(r));
    for (int d = 1; d <= r; ++d) {
        deriv[d - 1] = d * prod[d] / factorial;
    }
    return deriv;
}

double kernel_integral(KernelIndex idx, double alpha, KernelPath path) {
    check_alpha(alpha);
    check_qr(idx.q, idx.r);
    if (idx.n < 0) {
        return 0.0;
    }
    if (idx.n == 0 && path != KernelPath::Auto) {
        throw DomainError("kernel_integral: explicit paths need n >= 1");
    }
    const auto coeffs = dbinom_poly(idx.q, idx.r);
    const auto moments = scaled_moments(idx.n, alpha, path);
    double sum = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        sum += coeffs[m] * moments[m];
    }
    return sum;
}

double KernelTable::operator()(long n) const {
    if (n < 0) {
        return 0.0;
    }
    if (static_cast<std::size_t>(n) >= values_.size()) {
        throw IndexError("KernelTable: index " + std::to_string(n) + " beyond n_max " +
                         std::to_string(n_max()));
    }
    return values_[static_cast<std::size_t>(n)];
}

double KernelTable::nabla(long n, int order) const {
    if (order == 0) {
        return (*this)(n);
    }
    return nabla(n, order - 1) - nabla(n - 1, order - 1);
}

KernelTable kernel_table(double alpha, int q, int r, std::size_t n_max) {
    check_alpha(alpha);
    const auto coeffs = dbinom_poly(q, r);
    std::vector<double> values(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto moments = scaled_moments(static_cast<long>(n), alpha, KernelPath::Auto);
        double sum = 0.0;
        for (std::size_t m = 0; m < coeffs.size(); ++m) {
            sum += coeffs[m] * moments[m];
        }
        values[n] = sum;
    }
    return KernelTable(alpha, q, r, std::move(values));
}

std::vector<double> backward_diff(std::span<const double> seq, int order) {
    if (order < 0 || static_cast<std::size_t>(order) > seq.size()) {
        throw IndexError("backward_diff: order " + std::to_string(order) +
                         " exceeds sequence length " + std::to_string(seq.size()));
    }
    std::vector<double> out(seq.begin(), seq.end());
    for (int k = 0; k < order; ++k) {
        for (std::size_t n = out.size(); n-- > 1;) {
            out[n] -= out[n - 1];
        }
    }
    return out;
}

}  // namespace fracstep
