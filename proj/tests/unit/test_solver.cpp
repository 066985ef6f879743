#include <doctest.h>

#include <cmath>

#include "fracstep/harness.hpp"
#include "fracstep/solver.hpp"
#include "fracstep/special.hpp"

using namespace fracstep;

namespace {

ProblemSpec zero_rhs(double alpha) {
    ProblemSpec p;
    p.alpha = alpha;
    p.u0 = Complex(2.5, -1.0);
    p.rhs = GeneralRhs{[](double, Complex) { return Complex(0.0); }, {}};
    p.exact = [](double) { return Complex(2.5, -1.0); };
    return p;
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("zero right-hand side keeps the initial value") {
        for (auto s : all_schemes) {
            const auto r = solve(zero_rhs(0.5), s, GridSpec::make(1.0, 20));
            for (const auto& v : r.trajectory.values) {
                CHECK(std::abs(v - Complex(2.5, -1.0)) < 1e-12);
            }
            CHECK(r.final_error() < 1e-12);
        }
    }

    TEST_CASE("decay problem converges for every scheme") {
        for (auto s : all_schemes) {
            const auto p = mlf_decay(0.5);
            const double e1 = solve(p, s, GridSpec::make(1.0, 40)).final_error();
            const double e2 = solve(p, s, GridSpec::make(1.0, 80)).final_error();
            CHECK(e2 < e1);
            CHECK(e2 < 1e-2);
        }
    }

    TEST_CASE("linear problem: closed form and Newton agree") {
        const auto p = linear_complex(0.4, Complex(-1.0, 0.5));
        for (auto s : all_schemes) {
            const auto grid = GridSpec::make(1.0, 64);
            SolveOptions closed;
            SolveOptions newton;
            newton.force_newton = true;
            const auto a = solve(p, s, grid, closed);
            const auto b = solve(p, s, grid, newton);
            for (std::size_t n = 0; n <= 64; ++n) {
                CHECK(std::abs(a.trajectory.values[n] - b.trajectory.values[n]) < 1e-12);
            }
            CHECK(a.newton_iters.back() == 0);
            CHECK(b.newton_iters.back() > 0);
        }
    }

    TEST_CASE("(2,2) error on the linear problem") {
        // e^{-t} with lambda = -1 at alpha = 0.3: second-order accuracy plus
        // the smooth-solution order 3 - alpha.
        const auto p = linear_complex(0.3, Complex(-1.0, 0.0));
        const double e1 = solve(p, {2, 2}, GridSpec::make(1.0, 64)).final_error();
        const double e2 = solve(p, {2, 2}, GridSpec::make(1.0, 128)).final_error();
        const double rate = std::log2(e1 / e2);
        CHECK(rate > 2.3);
        CHECK(rate < 3.0);
    }

    TEST_CASE("nonlinear problem with analytic and finite-difference Jacobians") {
        auto p = nonlinear_square(0.6, Complex(-0.5, 0.3));
        const auto grid = GridSpec::make(1.0, 50);
        const auto a = solve(p, {3, 2}, grid);
        std::get<GeneralRhs>(p.rhs).df_du = nullptr;
        const auto b = solve(p, {3, 2}, grid);
        for (std::size_t n = 0; n <= 50; ++n) {
            CHECK(std::abs(a.trajectory.values[n] - b.trajectory.values[n]) < 1e-11);
        }
        CHECK(a.final_error() < 1e-4);
    }

    TEST_CASE("solves are deterministic") {
        const auto p = nonlinear_square(0.35, Complex(-1.0, 0.0));
        const auto a = solve(p, {3, 1}, GridSpec::make(1.0, 100));
        const auto b = solve(p, {3, 1}, GridSpec::make(1.0, 100));
        CHECK(a.trajectory.values == b.trajectory.values);
    }

    TEST_CASE("bootstrap starts") {
        const auto p = mlf_decay(0.5);
        const auto grid = GridSpec::make(1.0, 32);
        const auto starts = bootstrap_starts(p, {3, 3}, grid);
        REQUIRE(starts.size() == 2);
        const auto ref = solve(p, {1, 1}, grid);
        CHECK(starts[0] == ref.trajectory.values[1]);
        CHECK(starts[1] == ref.trajectory.values[2]);
        CHECK(bootstrap_starts(p, {1, 1}, grid).empty());

        SolveOptions opts;
        opts.starting = StartMode::Bootstrap;
        const auto r = solve(p, {3, 3}, grid, opts);
        CHECK(r.trajectory.values[1] == ref.trajectory.values[1]);
        CHECK(r.final_error() < 1e-2);
        // Bootstrapped runs lose accuracy against exact starts.
        CHECK(r.final_error() > solve(p, {3, 3}, grid).final_error());
    }

    TEST_CASE("unstable scheme blows up") {
        const auto p = linear_complex(0.9, rotated_lambda(1000.0, 0.5, 0.9));
        const auto r = solve(p, {3, 1}, GridSpec::make(1.0, 2048));
        CHECK(r.blowup);
        REQUIRE(r.blowup_step.has_value());
        CHECK(r.trajectory.values.size() == *r.blowup_step + 1);
        CHECK(r.final_error() > 1e30);
    }

    TEST_CASE("error conditions") {
        SolveOptions tight;
        tight.newton.max_iter = 1;
        tight.newton.tol = 1e-300;
        CHECK_THROWS_AS(solve(nonlinear_square(0.5, Complex(-1.0)), {2, 2}, GridSpec::make(1.0, 10), tight),
                        NewtonDiverged);

        const auto table = weight_table({1, 1}, 0.5, 4);
        const double dt = 0.25;
        // pivot omega_0 - dt^alpha lambda = 0
        const Complex lambda = table.omega(0) / std::pow(dt, 0.5);
        const auto p = linear_complex(0.5, lambda);
        CHECK_THROWS_AS(solve(p, {1, 1}, GridSpec::make(1.0, 4)), PivotBreakdown);

        auto no_exact = mlf_decay(0.5);
        no_exact.exact = nullptr;
        CHECK_THROWS_AS(solve(no_exact, {2, 2}, GridSpec::make(1.0, 10)), DomainError);
        SolveOptions boot;
        boot.starting = StartMode::Bootstrap;
        const auto r = solve(no_exact, {2, 2}, GridSpec::make(1.0, 10), boot);
        CHECK(r.errors.empty());

        auto bad = mlf_decay(0.5);
        bad.u0 = Complex(2.0);
        CHECK_THROWS_AS(solve(bad, {1, 1}, GridSpec::make(1.0, 10)), DomainError);
        NewtonConfig nc;
        nc.tol = -1.0;
        CHECK_THROWS_AS(nc.validate(), DomainError);
    }
}
