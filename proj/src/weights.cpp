#include "fracstep/weights.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "fracstep/kernel.hpp"

namespace fracstep {

namespace {

void check_inputs(SchemeId scheme, double alpha) {
    if (!scheme.valid()) {
        throw DomainError("invalid scheme " + to_string(scheme));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("weights: alpha must lie in (0,1)");
    }
}

// Kernel sequences used by one scheme; I^r_{.,q} is stored as t[r][q].
class Kernels {
public:
    Kernels(SchemeId scheme, double alpha, std::size_t n_max) {
        // Formulas reach at most index n + k - 1.
        const std::size_t len = n_max + 3;
        ones_.emplace(kernel_table(alpha, 1, 1, len));
        if (scheme.k >= 2) {
            for (int q = 1; q <= scheme.i; ++q) {
                t_[2][q].emplace(kernel_table(alpha, q, 2, len));
            }
            if (scheme == SchemeId{3, 1}) {
                t_[2][2].emplace(kernel_table(alpha, 2, 2, len));
            }
        }
        if (scheme.k == 3) {
            for (int q = 1; q <= scheme.i; ++q) {
                t_[3][q].emplace(kernel_table(alpha, q, 3, len));
            }
        }
    }

    double i(long n) const { return (*ones_)(n); }
    double di(long n) const { return ones_->nabla(n, 1); }
    double t(int r, int q, long n) const { return table(r, q)(n); }
    double d(int r, int q, long n, int order) const { return table(r, q).nabla(n, order); }

private:
    const KernelTable& table(int r, int q) const {
        const auto& slot = t_[r][q];
        if (!slot) {
            throw IndexError("weights: kernel I^" + std::to_string(r) + "_{n," +
                             std::to_string(q) + "} not prepared");
        }
        return *slot;
    }

    std::optional<KernelTable> ones_;
    std::optional<KernelTable> t_[4][4];
};

double omega_at(const Kernels& ker, SchemeId s, long n) {
    const auto I = [&](long m) { return ker.i(m); };
    const auto dI = [&](long m) { return ker.di(m); };
    const auto T = [&](int r, int q, long m) { return ker.t(r, q, m); };
    const auto D = [&](int r, int q, long m, int order) { return ker.d(r, q, m, order); };

    switch (s.k * 10 + s.i) {
        case 11:
            return dI(n);
        case 21:
            return dI(n) + D(2, 1, n, 2);
        case 22:
            switch (n) {
                case 0: return I(0) + I(1) + T(2, 1, 0) + T(2, 2, 1);
                case 1: return dI(2) - I(0) + T(2, 2, 2) - 2 * T(2, 1, 0) - 2 * T(2, 2, 1);
                case 2: return dI(3) + D(2, 2, 3, 2) + T(2, 1, 0);
                default: return dI(n + 1) + D(2, 2, n + 1, 2);
            }
        case 31:
            return dI(n) + D(2, 1, n, 2) + D(3, 1, n, 3);
        case 32:
            switch (n) {
                case 0:
                    return I(0) + I(1) + T(2, 2, 1) + T(2, 1, 0) + T(3, 2, 1) + T(3, 1, 0);
                case 1:
                    return dI(2) - I(0) + T(2, 2, 2) - 2 * T(2, 2, 1) - 2 * T(2, 1, 0) +
                           T(3, 2, 2) - 3 * T(3, 2, 1) - 3 * T(3, 1, 0);
                case 2:
                    return dI(3) + D(2, 2, 3, 2) + T(2, 1, 0) + T(3, 2, 3) - 3 * T(3, 2, 2) +
                           3 * T(3, 2, 1) + 3 * T(3, 1, 0);
                case 3:
                    return dI(4) + D(2, 2, 4, 2) + D(3, 2, 4, 3) - T(3, 1, 0);
                default:
                    return dI(n + 1) + D(2, 2, n + 1, 2) + D(3, 2, n + 1, 3);
            }
        case 33:
            switch (n) {
                case 0:
                    return I(0) + I(1) + I(2) + T(2, 1, 0) + T(2, 2, 1) + T(2, 3, 2) +
                           T(3, 1, 0) + T(3, 2, 1) + T(3, 3, 2);
                case 1:
                    return dI(3) - I(0) - I(1) + T(2, 3, 3) - 2 * T(2, 3, 2) - 2 * T(2, 2, 1) -
                           2 * T(2, 1, 0) + T(3, 3, 3) - 3 * T(3, 3, 2) - 3 * T(3, 2, 1) -
                           3 * T(3, 1, 0);
                case 2:
                    return dI(4) + D(2, 3, 4, 2) + T(2, 2, 1) + T(2, 1, 0) + T(3, 3, 4) -
                           3 * T(3, 3, 3) + 3 * T(3, 3, 2) + 3 * T(3, 1, 0) + 3 * T(3, 2, 1);
                case 3:
                    return dI(5) + D(2, 3, 5, 2) + D(3, 3, 5, 3) - T(3, 2, 1) - T(3, 1, 0);
                default:
                    return dI(n + 2) + D(2, 3, n + 2, 2) + D(3, 3, n + 2, 3);
            }
        default:
            throw DomainError("invalid scheme " + to_string(s));
    }
}

std::vector<double> starting_row(const Kernels& ker, SchemeId s, long m) {
    const auto I = [&](long n) { return ker.i(n); };
    const auto dI = [&](long n) { return ker.di(n); };
    const auto T = [&](int r, int q, long n) { return ker.t(r, q, n); };
    const auto D = [&](int r, int q, long n, int order) { return ker.d(r, q, n, order); };

    switch (s.k * 10 + s.i) {
        case 11:
            return {-I(m)};
        case 21:
            return {2 * T(2, 1, m - 1) - T(2, 1, m) - I(m), -T(2, 1, m - 1)};
        case 22:
            return {-D(2, 1, m + 1, 1) + T(2, 2, m), -T(2, 1, m)};
        case 31:
            return {
                -dI(m) - T(2, 1, m) + 2 * T(2, 1, m - 1) + T(2, 2, m - 1) - T(3, 1, m) +
                    3 * T(3, 1, m - 1) - 3 * T(3, 1, m - 2),
                -2 * I(m - 1) - 2 * T(2, 2, m - 1) - T(2, 1, m - 1) - T(3, 1, m - 1) +
                    3 * T(3, 1, m - 2),
                I(m - 1) + T(2, 2, m - 1) - T(3, 1, m - 2),
            };
        case 32:
            return {
                -dI(m + 1) - T(2, 2, m + 1) + 2 * T(2, 2, m) - T(3, 2, m + 1) +
                    3 * T(3, 2, m) - 3 * T(3, 2, m - 1),
                -I(m) - T(2, 2, m) - T(3, 2, m) + 3 * T(3, 2, m - 1),
                -T(3, 2, m - 1),
            };
        case 33:
            return {
                -dI(m + 2) - D(2, 3, m + 2, 2) - T(3, 3, m + 2) + 3 * T(3, 3, m + 1) -
                    3 * T(3, 3, m),
                -dI(m + 1) - T(2, 3, m + 1) + 2 * T(2, 3, m) - T(3, 3, m + 1) +
                    3 * T(3, 3, m),
                -I(m) - T(2, 3, m) - T(3, 3, m),
            };
        default:
            throw DomainError("invalid scheme " + to_string(s));
    }
}

}  // namespace

std::vector<double> convolution_weights(SchemeId scheme, double alpha, std::size_t n_max) {
    check_inputs(scheme, alpha);
    const Kernels ker(scheme, alpha, n_max);
    std::vector<double> omega(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        omega[n] = omega_at(ker, scheme, static_cast<long>(n));
    }
    return omega;
}

std::vector<double> starting_weights(SchemeId scheme, double alpha, std::size_t n) {
    check_inputs(scheme, alpha);
    if (n < static_cast<std::size_t>(scheme.k)) {
        throw IndexError("starting_weights: step " + std::to_string(n) + " below k = " +
                         std::to_string(scheme.k));
    }
    const Kernels ker(scheme, alpha, n);
    return starting_row(ker, scheme, static_cast<long>(n));
}

WeightTable::WeightTable(SchemeId scheme, double alpha, std::vector<double> omega,
                         std::vector<std::vector<double>> starting)
    : scheme_(scheme), alpha_(alpha), omega_(std::move(omega)), starting_(std::move(starting)) {
    if (omega_.empty()) {
        throw DomainError("WeightTable: need at least omega_0");
    }
    if (!(omega_[0] > 0.0)) {
        throw ConsistencyError("WeightTable: omega_0 must be positive");
    }
    const std::size_t k = static_cast<std::size_t>(scheme_.k);
    const std::size_t rows = omega_.size() > k ? omega_.size() - k : 0;
    if (starting_.size() != rows) {
        throw DomainError("WeightTable: expected " + std::to_string(rows) + " starting rows");
    }
    for (const auto& row : starting_) {
        if (row.size() != k) {
            throw DomainError("WeightTable: starting rows must have k entries");
        }
    }
}

double WeightTable::omega(std::size_t n) const {
    if (n >= omega_.size()) {
        throw IndexError("WeightTable: omega index " + std::to_string(n) + " beyond n_max " +
                         std::to_string(n_max()));
    }
    return omega_[n];
}

std::span<const double> WeightTable::starting(std::size_t n) const {
    const std::size_t k = static_cast<std::size_t>(scheme_.k);
    if (n < k || n > n_max()) {
        throw IndexError("WeightTable: starting row " + std::to_string(n) + " outside [" +
                         std::to_string(k) + ", " + std::to_string(n_max()) + "]");
    }
    return starting_[n - k];
}

double WeightTable::consistency_residual(std::size_t n) const {
    double sum = 0.0;
    for (double w : starting(n)) {
        sum += w;
    }
    for (std::size_t j = 0; j <= n; ++j) {
        sum += omega_[j];
    }
    return sum;
}

double WeightTable::max_consistency_residual() const {
    double worst = 0.0;
    // Running prefix sum keeps this O(N).
    double prefix = 0.0;
    const std::size_t k = static_cast<std::size_t>(scheme_.k);
    for (std::size_t n = 0; n <= n_max(); ++n) {
        prefix += omega_[n];
        if (n < k) {
            continue;
        }
        double sum = prefix;
        for (double w : starting_[n - k]) {
            sum += w;
        }
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

double WeightTable::omega_abs_sum() const {
    double sum = 0.0;
    for (double w : omega_) {
        sum += std::abs(w);
    }
    return sum;
}

WeightTable weight_table(SchemeId scheme, double alpha, std::size_t n_max) {
    check_inputs(scheme, alpha);
    const Kernels ker(scheme, alpha, n_max);
    std::vector<double> omega(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        omega[n] = omega_at(ker, scheme, static_cast<long>(n));
    }
    std::vector<std::vector<double>> starting;
    for (std::size_t n = static_cast<std::size_t>(scheme.k); n <= n_max; ++n) {
        starting.push_back(starting_row(ker, scheme, static_cast<long>(n)));
    }
    WeightTable table(scheme, alpha, std::move(omega), std::move(starting));
    const double residual = table.max_consistency_residual();
    if (residual > 1e-10) {
        throw ConsistencyError("weight_table " + to_string(scheme) +
                               ": constants not annihilated (residual " +
                               std::to_string(residual) + ")");
    }
    return table;
}

std::shared_ptr<const WeightTable> cached_weight_table(SchemeId scheme, double alpha,
                                                       std::size_t n_max) {
    using Key = std::tuple<int, int, std::uint64_t, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const WeightTable>> cache;

    const Key key{scheme.k, scheme.i, std::bit_cast<std::uint64_t>(alpha), n_max};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    auto table = std::make_shared<const WeightTable>(weight_table(scheme, alpha, n_max));
    std::lock_guard lock(mutex);
    return cache.try_emplace(key, std::move(table)).first->second;
}

}  // namespace fracstep
