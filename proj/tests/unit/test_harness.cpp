#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracstep/csv.hpp"
#include "fracstep/harness.hpp"
#include "fracstep/special.hpp"

using namespace fracstep;

TEST_SUITE("harness") {
    TEST_CASE("reference problems satisfy their initial conditions") {
        for (double a : {0.1, 0.5, 0.9}) {
            for (const auto& p : {mlf_decay(a), linear_complex(a, Complex(-2.0, 1.0)),
                                  nonlinear_square(a, Complex(-0.3, 0.2))}) {
                CHECK_NOTHROW(p.validate());
                CHECK(std::abs(p.exact(0.0) - p.u0) < 1e-15);
            }
        }
        CHECK(std::abs(mlf_decay(0.5).exact(1.0) - std::exp(1.0) * std::erfc(1.0)) < 1e-14);
        const Complex l = rotated_lambda(2.0, 0.5, 0.6);
        CHECK(std::abs(l) == doctest::Approx(2.0));
        CHECK(std::arg(l) == doctest::Approx(0.3 * std::numbers::pi));
    }

    TEST_CASE("convergence table") {
        ConvergenceSetup setup;
        setup.schemes = {{2, 2}, {1, 1}};
        setup.alphas = {0.5, 0.3};
        setup.M_list = {32, 64, 128};
        setup.threads = 2;
        const auto factory = [](double a) { return linear_complex(a, Complex(-1.0, 0.0)); };
        const auto rows = run_convergence(factory, setup);
        REQUIRE(rows.size() == 12);
        CHECK(rows[0].scheme == SchemeId{1, 1});
        CHECK(rows[0].alpha == 0.3);
        CHECK(rows[0].M == 32);
        CHECK_FALSE(rows[0].rate.has_value());
        for (const auto& r : rows) {
            const double direct =
                solve(factory(r.alpha), r.scheme, GridSpec::make(1.0, r.M)).final_error();
            CHECK(r.abs_err == direct);
            if (r.rate) {
                const double expect = r.scheme.k + 1.0 - r.alpha;
                CHECK(*r.rate == doctest::Approx(expect).epsilon(0.15));
            }
        }
        setup.threads = 1;
        const auto serial = run_convergence(factory, setup);
        for (std::size_t n = 0; n < rows.size(); ++n) {
            CHECK(serial[n].abs_err == rows[n].abs_err);
        }

        const auto text = convergence_csv(rows);
        const auto tables = csv::parse(text);
        REQUIRE(tables.size() == 1);
        CHECK(tables[0].header == std::vector<std::string>{"alpha", "k", "i", "M", "abs_err", "rate"});
        CHECK(tables[0].rows.size() == 12);
        CHECK_FALSE(tables[0].number(0, 5).has_value());
        CHECK(*tables[0].number(1, 4) == rows[1].abs_err);
    }

    TEST_CASE("fitted slope") {
        const std::vector<double> M{10, 20, 40, 80};
        std::vector<double> e;
        for (double m : M) {
            e.push_back(3.0 * std::pow(m, -2.5));
        }
        CHECK(fitted_slope(M, e) == doctest::Approx(-2.5).epsilon(1e-12));
    }

    TEST_CASE("truncation orders") {
        const std::vector<std::size_t> Ms{64, 128, 256, 512};
        const auto s22 = run_truncation_study({2, 2}, 0.5, 3, Ms);
        CHECK(s22.samples.size() == 4);
        CHECK(s22.order == doctest::Approx(2.5).epsilon(0.06));
        // (2,1): head degree 1 limits the head to order 2 - alpha on t^2
        const auto s21 = run_truncation_study({2, 1}, 0.5, 2, Ms);
        CHECK(s21.head_order == doctest::Approx(1.5).epsilon(0.1));
        const auto s21t = run_truncation_study({2, 1}, 0.5, 3, Ms);
        CHECK(s21t.tail_order == doctest::Approx(2.5).epsilon(0.06));
        // polynomials of degree <= k are reproduced by (k,k)
        const auto exact = run_truncation_study({3, 3}, 0.5, 3, Ms);
        for (const auto& smp : exact.samples) {
            CHECK(smp.max_tau < 1e-10);
        }
    }
}
