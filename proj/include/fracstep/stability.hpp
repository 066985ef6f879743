#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "fracstep/types.hpp"

namespace fracstep {

/// Truncated boundary locus zeta(theta) = sum_{n<=N} omega_n e^{i n theta},
/// sampled at theta_m = 2 pi m / samples for m = 0..samples (closed curve).
struct LocusCurve {
    SchemeId scheme;
    double alpha = 0.5;
    std::size_t terms = 0;
    std::vector<double> thetas;
    std::vector<Complex> points;
};

inline constexpr std::size_t kDefaultLocusTerms = 6000;
inline constexpr std::size_t kDefaultLocusSamples = 4096;

LocusCurve boundary_locus(SchemeId scheme, double alpha, std::size_t terms = kDefaultLocusTerms,
                          std::size_t samples = kDefaultLocusSamples);

/// Horner evaluation of sum_n c_n x^n.
Complex eval_power_series(std::span<const double> coeffs, Complex x);

/// Winding number of a closed polyline around z (the last point should repeat
/// the first).
int winding_number(std::span<const Complex> closed_curve, Complex z);

enum class Verdict {
    Inside,    ///< z lies in the stability region
    Outside,   ///< z lies in the omega-image of the closed unit disk
    Boundary,  ///< too close to the sampled curve to decide
};

const char* to_string(Verdict v);

struct MembershipResult {
    Verdict verdict = Verdict::Boundary;
    double margin = 0.0;  ///< distance from z to the resolved curve
    int winding = 0;
    std::size_t samples = 0;  ///< base sample count at which the verdict settled
};

/// Stability region of one scheme, with the locus evaluated lazily and
/// refined near each query point.
class StabilityRegion {
public:
    StabilityRegion(SchemeId scheme, double alpha, std::size_t terms = kDefaultLocusTerms);

    SchemeId scheme() const noexcept { return scheme_; }
    double alpha() const noexcept { return alpha_; }
    std::span<const double> omega() const noexcept { return omega_; }

    Complex locus_point(double theta) const;

    /// Winding-number membership starting from `samples` base points and
    /// doubling until the verdict repeats (at most 64 times the start).
    MembershipResult classify(Complex z, std::size_t samples = kDefaultLocusSamples);

private:
    struct Pass {
        int winding = 0;
        double margin = 0.0;
        bool resolved = true;
    };

    Pass pass(Complex z, std::size_t samples);
    const std::vector<Complex>& base_points(std::size_t samples);

    SchemeId scheme_;
    double alpha_;
    std::vector<double> omega_;
    std::map<std::size_t, std::vector<Complex>> base_;
};

/// One-off membership query; builds a StabilityRegion internally.
MembershipResult in_stability_region(SchemeId scheme, double alpha, Complex z,
                                     std::size_t terms = kDefaultLocusTerms,
                                     std::size_t samples = kDefaultLocusSamples);

/// phi_n = sum_{j<=n} omega_j and psi_n = sum_j g_{n-j}^{(1-alpha)} phi_j.
struct SeriesDiagnostics {
    std::vector<double> omega;
    std::vector<double> phi;
    std::vector<double> psi;
};

SeriesDiagnostics series_diagnostics(SchemeId scheme, double alpha, std::size_t n_max);

}  // namespace fracstep
