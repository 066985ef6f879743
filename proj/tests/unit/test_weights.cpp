#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "fracstep/special.hpp"
#include "fracstep/weights.hpp"

using namespace fracstep;

TEST_SUITE("weights") {
    TEST_CASE("(1,1) weights have the L1 closed form") {
        for (double a : {0.1, 0.5, 0.9}) {
            const auto w = convolution_weights({1, 1}, a, 50);
            const double g = gamma_real(2.0 - a);
            CHECK(w[0] == doctest::Approx(1.0 / g).epsilon(1e-14));
            for (std::size_t n = 1; n <= 50; ++n) {
                const double b = [&](double m) { return std::pow(m, 1.0 - a); }(n + 1.0) -
                                 2.0 * std::pow(static_cast<double>(n), 1.0 - a) +
                                 std::pow(n - 1.0, 1.0 - a);
                CHECK(std::abs(w[n] - b / g) < 1e-14);
            }
        }
    }

    TEST_CASE("omega_0 example") {
        const auto w = convolution_weights({1, 1}, 0.5, 4);
        CHECK(w[0] == doctest::Approx(1.1283791670955126).epsilon(1e-14));
        CHECK(w[1] < 0.0);
    }

    TEST_CASE("every row annihilates constants") {
        for (auto s : all_schemes) {
            for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const auto t = weight_table(s, a, 400);
                CHECK(t.max_consistency_residual() < 1e-12);
                CHECK(t.n_max() == 400);
                CHECK(t.starting(s.k).size() == static_cast<std::size_t>(s.k));
            }
        }
    }

    TEST_CASE("small tables") {
        const auto t = weight_table({1, 1}, 0.5, 1);
        CHECK(t.omega().size() == 2);
        CHECK(std::abs(t.starting(1)[0] + t.omega(0) + t.omega(1)) < 1e-14);
        CHECK_THROWS_AS(t.starting(0), IndexError);
        CHECK_THROWS_AS(t.starting(2), IndexError);
        CHECK_THROWS_AS(t.omega(2), IndexError);
        const auto t3 = weight_table({3, 2}, 0.5, 3);
        CHECK_THROWS_AS(t3.starting(2), IndexError);
        CHECK_NOTHROW(t3.starting(3));
        CHECK_THROWS_AS(starting_weights({3, 1}, 0.5, 2), IndexError);
    }

    TEST_CASE("alpha near one approaches backward differences") {
        // (1,1): omega -> (1, -1, 0, ...)
        const auto w = convolution_weights({1, 1}, 0.999, 10);
        CHECK(w[0] == doctest::Approx(1.0).epsilon(2e-3));
        CHECK(w[1] == doctest::Approx(-1.0).epsilon(3e-3));
        for (std::size_t n = 2; n <= 10; ++n) {
            CHECK(std::abs(w[n]) < 1e-3);
        }
        // (2,2): BDF2 weights 3/2, -2, 1/2
        const auto w2 = convolution_weights({2, 2}, 0.999, 10);
        CHECK(w2[0] == doctest::Approx(1.5).epsilon(3e-3));
        CHECK(w2[1] == doctest::Approx(-2.0).epsilon(3e-3));
        CHECK(w2[2] == doctest::Approx(0.5).epsilon(5e-3));
    }

    TEST_CASE("weights decay and stay summable") {
        for (auto s : all_schemes) {
            const auto t = weight_table(s, 0.5, 4000);
            CHECK(std::abs(t.omega(4000)) < 1e-3 * std::abs(t.omega(0)));
            CHECK(std::isfinite(t.omega_abs_sum()));
            // omega_j ~ j^(-1-alpha): ratio between j and 2j near 2^(-1.5)
            const double ratio = t.omega(4000) / t.omega(2000);
            CHECK(ratio == doctest::Approx(std::pow(2.0, -1.5)).epsilon(0.02));
        }
    }

    TEST_CASE("starting weights for uniform rows") {
        // The (k,k) rows for n large enough depend on n only through the tail.
        const auto a = starting_weights({2, 2}, 0.4, 10);
        const auto t = weight_table({2, 2}, 0.4, 10);
        REQUIRE(a.size() == 2);
        CHECK(a[0] == t.starting(10)[0]);
        CHECK(a[1] == t.starting(10)[1]);
    }

    TEST_CASE("cache is shared and thread safe") {
        const auto p = cached_weight_table({3, 1}, 0.35, 300);
        const auto q = cached_weight_table({3, 1}, 0.35, 300);
        CHECK(p.get() == q.get());
        CHECK(cached_weight_table({3, 1}, 0.3500000001, 300).get() != p.get());
        std::vector<std::thread> pool;
        std::vector<const WeightTable*> seen(8);
        for (int w = 0; w < 8; ++w) {
            pool.emplace_back([w, &seen] {
                seen[w] = cached_weight_table({2, 1}, 0.61, 500).get();
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto* ptr : seen) {
            CHECK(ptr == seen[0]);
        }
    }

    TEST_CASE("invalid arguments") {
        CHECK_THROWS_AS(weight_table({1, 2}, 0.5, 10), DomainError);
        CHECK_THROWS_AS(weight_table({1, 1}, 1.0, 10), DomainError);
    }
}
