#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "fracdual/stable_params.hpp"

using namespace fracdual;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr Parametrization kTags[] = {Parametrization::LukacsTheta, Parametrization::ZolotarevEta,
                                     Parametrization::StBeta, Parametrization::FellerQ};

StableParams random_params(std::mt19937_64& rng, Parametrization tag) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double alpha;
    do {
        alpha = 0.2 + 1.75 * u(rng);
    } while (std::abs(alpha - 1.0) < 0.05);
    const double bound = eta_bound(alpha);
    const double eta = bound * (2.0 * u(rng) - 1.0) * 0.98;
    const double b = 0.3 + 2.7 * u(rng);
    return convert(zolotarev(alpha, eta, b), tag);
}

void require_same(const StableParams& a, const StableParams& b) {
    REQUIRE(a.tag == b.tag);
    REQUIRE_THAT(a.alpha, WithinRel(b.alpha, 1e-12));
    REQUIRE_THAT(a.asym, WithinRel(b.asym, 1e-12) || WithinAbs(b.asym, 1e-13));
    REQUIRE_THAT(a.scale, WithinRel(b.scale, 1e-12));
}

}  // namespace

TEST_CASE("eta 2 - alpha is theta = +1", "[stable_params]") {
    const auto p = convert(zolotarev(1.5, 0.5), Parametrization::LukacsTheta);
    REQUIRE_THAT(p.asym, WithinAbs(1.0, 1e-12));
}

TEST_CASE("q = 1 is beta = -1", "[stable_params]") {
    const auto p = convert(StableParams::make(Parametrization::FellerQ, 1.5, 1.0, 1.0), Parametrization::StBeta);
    REQUIRE_THAT(p.asym, WithinAbs(-1.0, 1e-12));
}

TEST_CASE("symmetric eta form maps to c = b, theta = 0", "[stable_params]") {
    const auto p = convert(zolotarev(1.3, 0.0, 1.0), Parametrization::LukacsTheta);
    REQUIRE_THAT(p.scale, WithinRel(1.0, 1e-14));
    REQUIRE_THAT(p.asym, WithinAbs(0.0, 1e-15));
}

TEST_CASE("dual parameters", "[stable_params]") {
    auto d = dual_params(2.0, 0.0);
    REQUIRE_THAT(d.alpha_star, WithinRel(0.5, 1e-15));
    REQUIRE_THAT(d.eta_star, WithinRel(0.5, 1e-15));
    d = dual_params(1.6, 0.1);
    REQUIRE_THAT(d.alpha_star, WithinRel(0.625, 1e-14));
    REQUIRE_THAT(d.eta_star, WithinRel(0.4375, 1e-14));
    REQUIRE_THROWS_AS(dual_params(0.8, 0.0), Error);
}

TEST_CASE("dual of the totally skewed case is totally skewed", "[stable_params][property]") {
    for (double alpha = 1.01; alpha <= 2.0; alpha += 0.01) {
        const auto d = dual_params(alpha, 2.0 - alpha);
        REQUIRE_THAT(d.eta_star, WithinRel(d.alpha_star, 1e-12));
    }
}

TEST_CASE("range rules", "[stable_params]") {
    CHECK_FALSE(validate(StableParams{Parametrization::ZolotarevEta, 1.5, 0.6, 1.0}).ok);
    CHECK(validate(StableParams{Parametrization::ZolotarevEta, 0.7, 0.7, 1.0}).ok);
    CHECK(validate(StableParams{Parametrization::StBeta, 2.0, 0.0, 1.0}).ok);
    CHECK_FALSE(validate(StableParams{Parametrization::ZolotarevEta, 1.0, 0.0, 1.0}).ok);
    CHECK_FALSE(validate(StableParams{Parametrization::ZolotarevEta, 2.1, 0.0, 1.0}).ok);
    CHECK_FALSE(validate(StableParams{Parametrization::StBeta, 1.5, 1.2, 1.0}).ok);
    CHECK_FALSE(validate(StableParams{Parametrization::FellerQ, 1.5, 1.5, 1.0}).ok);
    REQUIRE_THROWS_AS(StableParams::make(Parametrization::ZolotarevEta, 1.5, 0.6, 1.0), Error);
    try {
        StableParams::make(Parametrization::ZolotarevEta, 1.5, 0.6, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
        CHECK(std::string(e.what()).find("2 - alpha") != std::string::npos);
    }
}

TEST_CASE("parametrization names round trip", "[stable_params]") {
    for (auto tag : kTags) REQUIRE(parse_parametrization(to_string(tag)) == tag);
    REQUIRE_FALSE(parse_parametrization("gamma").has_value());
}

TEST_CASE("convert is an involution across tag pairs", "[stable_params][property]") {
    std::mt19937_64 rng(20261016);
    for (auto from : kTags) {
        for (auto to : kTags) {
            for (int i = 0; i < 200; ++i) {
                const StableParams p = random_params(rng, from);
                require_same(convert(convert(p, to), from), p);
            }
        }
    }
}

TEST_CASE("characteristic exponent is invariant under conversion", "[stable_params][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(-6.0, 6.0);
    for (auto from : kTags) {
        for (auto to : kTags) {
            for (int i = 0; i < 25; ++i) {
                const StableParams p = random_params(rng, from);
                const StableParams q = convert(p, to);
                for (int k = 0; k < 20; ++k) {
                    const double l = lam(rng);
                    const auto a = characteristic_exponent(p, l);
                    const auto b = characteristic_exponent(q, l);
                    REQUIRE(std::abs(a - b) <= 1e-10 * std::abs(a));
                }
            }
        }
    }
}

TEST_CASE("Gaussian exponent", "[stable_params]") {
    const auto p = zolotarev(2.0, 0.0, 1.5);
    const auto psi = characteristic_exponent(p, 2.0);
    REQUIRE_THAT(psi.real(), WithinRel(-6.0, 1e-14));
    REQUIRE_THAT(psi.imag(), WithinAbs(0.0, 1e-14));
    for (auto tag : kTags) {
        const auto q = convert(p, tag);
        REQUIRE_THAT(characteristic_exponent(q, 2.0).real(), WithinRel(-6.0, 1e-12));
    }
}
