#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracstep/special.hpp"
#include "fracstep/stability.hpp"
#include "fracstep/weights.hpp"

using namespace fracstep;

TEST_SUITE("stability") {
    TEST_CASE("locus at theta = 0 is the weights sum") {
        for (auto s : all_schemes) {
            const auto locus = boundary_locus(s, 0.5, 2000, 64);
            REQUIRE(locus.points.size() == 65);
            CHECK(std::abs(locus.points.front() - locus.points.back()) < 1e-12);
            CHECK(std::abs(locus.points.front()) < 0.05);
        }
    }

    TEST_CASE("locus at theta = pi") {
        StabilityRegion be({1, 1}, 0.999);
        CHECK(be.locus_point(std::numbers::pi).real() == doctest::Approx(2.0).epsilon(5e-3));
        for (auto s : all_schemes) {
            for (double a : {0.2, 0.5, 0.8}) {
                StabilityRegion r(s, a);
                const Complex z = r.locus_point(std::numbers::pi);
                CHECK(z.real() > 0.0);
                CHECK(std::abs(z.imag()) < 1e-9);
            }
        }
    }

    TEST_CASE("membership examples") {
        CHECK(in_stability_region({1, 1}, 0.5, Complex(-11.18, 0.0)).verdict == Verdict::Inside);
        CHECK(in_stability_region({2, 2}, 0.5, Complex(-1.0, 0.0)).verdict == Verdict::Inside);
        const auto origin = in_stability_region({1, 1}, 0.5, Complex(0.0, 0.0));
        CHECK(origin.verdict == Verdict::Outside);
        CHECK(origin.margin == 0.0);
        for (auto s : all_schemes) {
            StabilityRegion r(s, 0.5);
            const double top = r.locus_point(std::numbers::pi).real();
            const auto mid = r.classify(Complex(0.5 * top, 0.0));
            CHECK(mid.verdict == Verdict::Outside);
            CHECK(mid.winding != 0);
            const auto far = r.classify(Complex(-1e4, 3e3));
            CHECK(far.verdict == Verdict::Inside);
            CHECK(far.winding == 0);
            CHECK(r.classify(Complex(10.0 * top, 0.0)).verdict == Verdict::Inside);
        }
    }

    TEST_CASE("winding number of a square") {
        const std::vector<Complex> sq{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}};
        CHECK(winding_number(sq, Complex(0, 0)) == 1);
        CHECK(winding_number(sq, Complex(3, 0)) == 0);
        const std::vector<Complex> rev(sq.rbegin(), sq.rend());
        CHECK(winding_number(rev, Complex(0.2, -0.3)) == -1);
    }

    TEST_CASE("power series evaluation") {
        const std::vector<double> c{1.0, 2.0, 3.0};
        CHECK(std::abs(eval_power_series(c, Complex(0.5, 0.0)) - 2.75) < 1e-15);
        CHECK(std::abs(eval_power_series(c, Complex(0.0, 1.0)) - Complex(-2.0, 2.0)) < 1e-15);
    }

    TEST_CASE("series diagnostics") {
        for (auto s : all_schemes) {
            const auto d = series_diagnostics(s, 0.5, 20000);
            CHECK(d.phi[0] == d.omega[0]);
            double psi_sum = 0.0;
            for (double p : d.psi) {
                psi_sum += p;
            }
            CHECK(psi_sum > 0.9);
            CHECK(psi_sum < 1.1);
            // (1 - xi)^alpha psi = omega
            const auto g = binom_series(0.5, 200);
            for (std::size_t n = 0; n <= 200; ++n) {
                double acc = 0.0;
                for (std::size_t j = 0; j <= n; ++j) {
                    acc += g.coeffs[n - j] * d.psi[j];
                }
                CHECK(std::abs(acc - d.omega[n]) < 1e-12);
            }
        }
    }

    TEST_CASE("verdict names") {
        CHECK(std::string(to_string(Verdict::Inside)) == "inside");
        CHECK(std::string(to_string(Verdict::Outside)) == "outside");
        CHECK(std::string(to_string(Verdict::Boundary)) == "boundary");
    }
}
