#include <doctest.h>

#include <cmath>
#include <random>

#include "fracstep/oracle.hpp"
#include "fracstep/quadrature.hpp"
#include "fracstep/special.hpp"

using namespace fracstep;

TEST_SUITE("oracle") {
    TEST_CASE("Lagrange and backward-difference forms agree") {
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> val(-2.0, 2.0);
        std::uniform_real_distribution<double> sd(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Complex> samples(12);
            for (auto& x : samples) {
                x = Complex(val(rng), val(rng));
            }
            const int k = 1 + trial % 3;
            const int q = 1 + (trial / 3) % k;
            const long j = k - q + 1 + trial % 5;
            const double s = sd(rng);
            const Complex a = lagrange_piece_eval(samples, j, q, k, s);
            const Complex b = newton_piece_eval(samples, j, q, k, s);
            CHECK(std::abs(a - b) < 1e-12);
        }
    }

    TEST_CASE("pieces interpolate their nodes and reproduce polynomials") {
        std::vector<Complex> samples;
        for (int n = 0; n <= 8; ++n) {
            samples.emplace_back(n * n * n - 2.0 * n, 0.0);
        }
        // Cubic piece through nodes 2..5 on I_4, s measured from t_3.
        for (double s : {0.0, 0.3, 1.0, 2.0, -1.0}) {
            const double x = 3.0 + s;
            CHECK(std::abs(lagrange_piece_eval(samples, 4, 2, 3, s) - (x * x * x - 2.0 * x)) < 1e-11);
            CHECK(std::abs(lagrange_piece_deriv(samples, 4, 2, 3, s) - (3.0 * x * x - 2.0)) < 1e-11);
        }
        CHECK_THROWS_AS(lagrange_piece_eval(samples, 1, 1, 3, 0.5), IndexError);
        CHECK_THROWS_AS(lagrange_piece_eval(samples, 9, 1, 1, 0.5), IndexError);
    }

    TEST_CASE("piecewise interpolant is continuous") {
        const auto grid = GridSpec::make(1.0, 12);
        std::vector<Complex> samples;
        for (std::size_t n = 0; n <= 12; ++n) {
            samples.emplace_back(std::cos(3.0 * grid.t(n)), std::sin(grid.t(n)));
        }
        const auto check = [&](const PiecewiseInterpolant& p) {
            const int k = p.scheme().k;
            for (std::size_t n = k; n <= 12; ++n) {
                const auto pieces = p.layout(n);
                REQUIRE(pieces.size() == n);
                for (std::size_t j = 0; j < n; ++j) {
                    CHECK(pieces[j].j == static_cast<long>(j + 1));
                    CHECK(std::abs(p.piece_value(pieces[j], 0.0) - samples[j]) < 1e-12);
                    CHECK(std::abs(p.piece_value(pieces[j], 1.0) - samples[j + 1]) < 1e-12);
                }
            }
        };
        for (auto s : all_schemes) {
            check(PiecewiseInterpolant(s, grid, samples));
        }
        check(PiecewiseInterpolant({2, 1}, grid, samples, PiecewiseInterpolant::Variant::P32));
    }

    TEST_CASE("layout degrees") {
        const auto grid = GridSpec::make(1.0, 10);
        std::vector<Complex> samples(11, Complex(1.0));
        const PiecewiseInterpolant p({3, 1}, grid, samples);
        const auto pieces = p.layout(10);
        CHECK(pieces[0].degree == 2);
        CHECK(pieces[1].degree == 2);
        CHECK(pieces[2].degree == 3);
        CHECK(pieces[9].degree == 3);
        CHECK_THROWS_AS(p.layout(2), IndexError);
    }

    TEST_CASE("Caputo derivative of monomials") {
        CHECK(caputo_monomial(0, 0.5, 1.0) == 0.0);
        CHECK(caputo_monomial(2, 0.5, 0.0) == 0.0);
        CHECK(caputo_monomial(1, 0.5, 1.0) == doctest::Approx(1.0 / gamma_real(1.5)).epsilon(1e-14));
        CHECK(caputo_monomial(3, 0.5, 0.75) == doctest::Approx(0.8794845214).epsilon(1e-9));
    }

    TEST_CASE("oracle matches the Caputo derivative of an exactly reproduced polynomial") {
        for (auto s : all_schemes) {
            const auto grid = GridSpec::make(1.0, 16);
            const int deg = s.k - 1 == 0 ? 1 : s.k - 1;
            std::vector<Complex> samples;
            for (std::size_t n = 0; n <= 16; ++n) {
                samples.emplace_back(std::pow(grid.t(n), deg), 0.0);
            }
            const PiecewiseInterpolant p(s, grid, samples);
            for (std::size_t n = s.k; n <= 16; ++n) {
                const Complex d = oracle_discrete_caputo(p, 0.6, n);
                CHECK(std::abs(d - caputo_monomial(deg, 0.6, grid.t(n))) < 1e-12);
            }
        }
    }

    TEST_CASE("oracle agrees with the discrete operator") {
        for (auto s : all_schemes) {
            const auto grid = GridSpec::make(1.0, 20);
            const auto table = weight_table(s, 0.4, 20);
            const auto traj = Trajectory::sample(grid, [](double t) { return std::exp(t) * std::sin(2 * t); });
            const PiecewiseInterpolant p(s, grid, traj.values);
            for (std::size_t n = s.k; n <= 20; ++n) {
                const Complex a = apply_discrete_caputo(table, traj, n);
                const Complex b = oracle_discrete_caputo(p, 0.4, n);
                CHECK(std::abs(a - b) < 1e-12 * std::pow(grid.dt(), -0.4));
            }
        }
    }

    TEST_CASE("interpolation error decreases at order k+1") {
        std::vector<double> errs;
        for (std::size_t M : {32, 64}) {
            const auto grid = GridSpec::make(1.0, M);
            const auto traj = Trajectory::sample(grid, [](double t) { return std::exp(t); });
            const PiecewiseInterpolant p({3, 3}, grid, traj.values);
            double e = 0.0;
            for (const auto& piece : p.layout(M)) {
                const double t = grid.t(piece.j - 1) + 0.5 * grid.dt();
                e = std::max(e, std::abs(p.piece_value(piece, 0.5) - std::exp(t)));
            }
            errs.push_back(e);
        }
        CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(4.0).epsilon(0.05));
    }

    TEST_CASE("Gauss rules integrate polynomials exactly") {
        const auto gl = gauss_legendre(10);
        double s = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            s += gl.weights[i] * std::pow(gl.nodes[i], 19);
        }
        CHECK(s == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
        // int_0^1 (1-s)^(-1/2) s^2 ds = B(3, 1/2) = 16/15
        const auto gj = gauss_jacobi(10, -0.5, 0.0);
        double t = 0.0;
        for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
            t += gj.weights[i] * gj.nodes[i] * gj.nodes[i];
        }
        CHECK(t == doctest::Approx(16.0 / 15.0).epsilon(1e-13));
    }
}
