#pragma once

#include <array>
#include <complex>
#include <string>

#include "fracstep/error.hpp"

namespace fracstep {

using Complex = std::complex<double>;

/// Throws DomainError unless both components of `z` are finite.
void require_finite(Complex z, const char* what);
void require_finite(double x, const char* what);

/// Selects one discrete Caputo operator: degree k of the piecewise
/// interpolant and interpolation-shift pattern i, with 1 <= i <= k <= 3.
struct SchemeId {
    int k = 1;
    int i = 1;

    constexpr bool valid() const noexcept { return 1 <= i && i <= k && k <= 3; }

    friend constexpr bool operator==(SchemeId, SchemeId) = default;
    friend constexpr auto operator<=>(SchemeId, SchemeId) = default;
};

/// Throws DomainError for an invalid (k,i) pair.
SchemeId make_scheme(int k, int i);

std::string to_string(SchemeId s);

inline constexpr std::array<SchemeId, 6> all_schemes{{
    {1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3},
}};

}  // namespace fracstep
