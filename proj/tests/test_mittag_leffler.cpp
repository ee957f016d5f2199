#include <cmath>

#include "catch_amalgamated.hpp"
#include "fracdual/mittag_leffler.hpp"
#include "oracles.hpp"

using namespace fracdual;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("E_1/2(-z) against exp(z^2) erfc(z)", "[mittag_leffler]") {
    REQUIRE_THAT(mittag_leffler(0.5, -1.0), WithinAbs(0.42758357615580705, 1e-15));
    for (double z : {0.01, 0.3, 1.0, 2.5, 4.99, 5.0, 5.01, 8.0, 30.0, 200.0}) {
        INFO("z = " << z);
        REQUIRE_THAT(mittag_leffler(0.5, -z), WithinRel(oracle::ml_half(z), 1e-9));
    }
}

TEST_CASE("E_1/2 on the positive side", "[mittag_leffler]") {
    // E_{1/2}(z) = exp(z^2) erfc(-z)
    for (double z : {0.5, 2.0, 4.5}) {
        REQUIRE_THAT(mittag_leffler(0.5, z), WithinRel(std::exp(z * z) * std::erfc(-z), 1e-12));
    }
}

TEST_CASE("special orders and arguments", "[mittag_leffler]") {
    REQUIRE(mittag_leffler(0.7, 0.0) == 1.0);
    REQUIRE_THAT(mittag_leffler(1.0, -3.0), WithinRel(std::exp(-3.0), 1e-15));
    REQUIRE_THAT(mittag_leffler(1.0, 7.0), WithinRel(std::exp(7.0), 1e-15));
}

TEST_CASE("series and integral branches meet at z = -5", "[mittag_leffler][property]") {
    for (double beta : {0.3, 0.5, 0.75, 0.9}) {
        const double inner = mittag_leffler(beta, -5.0);
        const double outer = detail::ml_negative_integral(beta, 5.0, {});
        REQUIRE_THAT(inner, WithinRel(outer, 1e-9));
    }
}

TEST_CASE("E_beta(-x) is decreasing and positive", "[mittag_leffler][property]") {
    for (double beta : {0.25, 0.5, 0.75, 0.95}) {
        double prev = 1.0;
        for (double x = 0.25; x <= 40.0; x += 0.25) {
            const double v = mittag_leffler(beta, -x);
            REQUIRE(v > 0.0);
            REQUIRE(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("errors", "[mittag_leffler]") {
    REQUIRE_THROWS_AS(mittag_leffler(0.0, -1.0), Error);
    REQUIRE_THROWS_AS(mittag_leffler(1.5, -1.0), Error);
    try {
        mittag_leffler(0.5, 6.0);
        FAIL("expected NON_CONVERGED");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NonConverged);
    }
}
