#include "fracstep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracstep/special.hpp"
#include "fracstep/weights.hpp"

namespace fracstep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kChordRatio = 0.05;
constexpr int kMaxDepth = 40;
constexpr std::size_t kMaxDoublings = 6;

double segment_distance(Complex a, Complex b, Complex z) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((z - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(a + t * d - z);
}

}  // namespace

Complex eval_power_series(std::span<const double> coeffs, Complex x) {
    Complex acc{0.0, 0.0};
    for (std::size_t n = coeffs.size(); n-- > 0;) {
        acc = acc * x + coeffs[n];
    }
    return acc;
}

int winding_number(std::span<const Complex> closed_curve, Complex z) {
    double total = 0.0;
    for (std::size_t m = 1; m < closed_curve.size(); ++m) {
        const Complex a = closed_curve[m - 1] - z;
        const Complex b = closed_curve[m] - z;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

LocusCurve boundary_locus(SchemeId scheme, double alpha, std::size_t terms, std::size_t samples) {
    if (terms < 1 || samples < 16) {
        throw DomainError("boundary_locus: need terms >= 1 and samples >= 16");
    }
    const StabilityRegion region(scheme, alpha, terms);
    LocusCurve curve{scheme, alpha, terms, {}, {}};
    curve.thetas.resize(samples + 1);
    curve.points.resize(samples + 1);
    for (std::size_t m = 0; m < samples; ++m) {
        const double theta = kTwoPi * static_cast<double>(m) / static_cast<double>(samples);
        curve.thetas[m] = theta;
        curve.points[m] = region.locus_point(theta);
    }
    curve.thetas[samples] = kTwoPi;
    curve.points[samples] = curve.points[0];
    return curve;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Inside: return "inside";
        case Verdict::Outside: return "outside";
        case Verdict::Boundary: return "boundary";
    }
    return "boundary";
}

StabilityRegion::StabilityRegion(SchemeId scheme, double alpha, std::size_t terms)
    : scheme_(scheme), alpha_(alpha) {
    if (terms < 1) {
        throw DomainError("stability: need terms >= 1");
    }
    omega_ = convolution_weights(scheme, alpha, terms);
}

Complex StabilityRegion::locus_point(double theta) const {
    return eval_power_series(omega_, std::polar(1.0, theta));
}

const std::vector<Complex>& StabilityRegion::base_points(std::size_t samples) {
    auto it = base_.find(samples);
    if (it != base_.end()) {
        return it->second;
    }
    std::vector<Complex> pts(samples + 1);
    for (std::size_t m = 0; m < samples; ++m) {
        pts[m] = locus_point(kTwoPi * static_cast<double>(m) / static_cast<double>(samples));
    }
    pts[samples] = pts[0];
    return base_.emplace(samples, std::move(pts)).first->second;
}

StabilityRegion::Pass StabilityRegion::pass(Complex z, std::size_t samples) {
    const auto& pts = base_points(samples);
    const double h = kTwoPi / static_cast<double>(samples);
    Pass out;
    out.margin = std::numeric_limits<double>::infinity();
    double total = 0.0;
    double nearest_chord = 0.0;

    // Bisects [theta0, theta0 + width] until each chord is small against its
    // distance to z, accumulating the signed angle.
    struct Seg {
        double theta;
        double width;
        Complex a;
        Complex b;
        int depth;
    };
    std::vector<Seg> stack;
    for (std::size_t m = 0; m < samples; ++m) {
        stack.push_back({h * static_cast<double>(m), h, pts[m], pts[m + 1], 0});
        while (!stack.empty()) {
            const Seg seg = stack.back();
            stack.pop_back();
            const double chord = std::abs(seg.b - seg.a);
            const double dist = segment_distance(seg.a, seg.b, z);
            if (chord > kChordRatio * dist && seg.depth < kMaxDepth) {
                const double mid = seg.theta + 0.5 * seg.width;
                const Complex pm = locus_point(mid);
                // Push the right half first so the left one is handled next.
                stack.push_back({mid, 0.5 * seg.width, pm, seg.b, seg.depth + 1});
                stack.push_back({seg.theta, 0.5 * seg.width, seg.a, pm, seg.depth + 1});
                continue;
            }
            if (dist < out.margin) {
                out.margin = dist;
                nearest_chord = chord;
            }
            if (dist > 0.0) {
                total += std::arg((seg.b - z) / (seg.a - z));
            }
        }
    }
    out.winding = static_cast<int>(std::lround(total / kTwoPi));
    out.resolved = out.margin >= 1e-12 && out.margin >= 10.0 * nearest_chord;
    return out;
}

MembershipResult StabilityRegion::classify(Complex z, std::size_t samples) {
    require_finite(z, "stability: z");
    if (samples < 16) {
        throw DomainError("stability: need samples >= 16");
    }
    MembershipResult result;
    if (z == Complex{0.0, 0.0}) {
        // omega(1) = 0 exactly; the truncated curve misses the origin by phi_N.
        result.verdict = Verdict::Outside;
        result.margin = 0.0;
        result.samples = samples;
        return result;
    }
    Pass prev = pass(z, samples);
    std::size_t s = samples;
    for (std::size_t d = 0; d < kMaxDoublings; ++d) {
        const Pass next = pass(z, 2 * s);
        s *= 2;
        const bool same = next.resolved == prev.resolved && next.winding == prev.winding;
        prev = next;
        if (same) {
            break;
        }
    }
    result.margin = prev.margin;
    result.winding = prev.winding;
    result.samples = s;
    if (!prev.resolved) {
        result.verdict = Verdict::Boundary;
    } else {
        result.verdict = prev.winding == 0 ? Verdict::Inside : Verdict::Outside;
    }
    return result;
}

MembershipResult in_stability_region(SchemeId scheme, double alpha, Complex z, std::size_t terms,
                                     std::size_t samples) {
    StabilityRegion region(scheme, alpha, terms);
    return region.classify(z, samples);
}

SeriesDiagnostics series_diagnostics(SchemeId scheme, double alpha, std::size_t n_max) {
    if (n_max < 1) {
        throw DomainError("series_diagnostics: need n_max >= 1");
    }
    SeriesDiagnostics out;
    out.omega = convolution_weights(scheme, alpha, n_max);
    out.phi.resize(n_max + 1);
    double run = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        run += out.omega[n];
        out.phi[n] = run;
    }
    const auto g = binom_series(1.0 - alpha, n_max).coeffs;
    out.psi.assign(n_max + 1, 0.0);
    for (std::size_t n = 0; n <= n_max; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            acc += g[n - j] * out.phi[j];
        }
        out.psi[n] = acc;
    }
    return out;
}

}  // namespace fracstep
