#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "fracdual/subordination.hpp"
#include "oracles.hpp"

using namespace fracdual;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double dirichlet_delta_series(double x, double x0, double u, double length) {
    double s = 0.0;
    for (int n = 1; n < 400; ++n) {
        const double k = n * std::numbers::pi / length;
        s += (2.0 / length) * std::sin(k * x) * std::sin(k * x0) * std::exp(-k * k * u);
    }
    return s;
}

}  // namespace

TEST_CASE("heat semigroup", "[subordination]") {
    REQUIRE_THAT(heat_semigroup(0.0, 1.0, PointSource{}), WithinAbs(0.282095, 1e-6));
    REQUIRE_THAT(heat_semigroup(0.0, 1.0, PointSource{}), WithinRel(1.0 / std::sqrt(4.0 * std::numbers::pi), 1e-15));
    // narrow Gaussian datum: the convolution is again Gaussian
    const FunctionDatum narrow{[](double y) { return oracle::gauss(y, 0.01); }, -3.0, 3.0};
    for (double x : {-0.2, 0.0, 0.15}) {
        REQUIRE_THAT(heat_semigroup(x, 1e-4, narrow), WithinRel(oracle::gauss(x, 0.0101), 1e-9));
        REQUIRE_THAT(heat_semigroup(x, 0.3, narrow), WithinRel(oracle::gauss(x, 0.31), 1e-9));
    }
    // hat function through exact erf segments and through quadrature
    const TabulatedDatum hat{{-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
    const FunctionDatum hat_f{[](double y) { return std::max(0.0, 1.0 - std::abs(y)); }, -1.0, 1.0};
    for (double x : {-1.5, 0.0, 0.4, 2.0}) {
        REQUIRE_THAT(heat_semigroup(x, 0.2, hat), WithinRel(heat_semigroup(x, 0.2, hat_f), 1e-10));
    }
    REQUIRE_THAT(datum_mass(hat), WithinRel(1.0, 1e-15));
    REQUIRE_THAT(datum_mass(hat_f), WithinRel(1.0, 1e-12));
    REQUIRE_THROWS_AS(heat_semigroup(0.0, 0.0, PointSource{}), Error);
}

TEST_CASE("Dirichlet semigroup on an interval", "[subordination]") {
    const double v = dirichlet_interval_semigroup(0.5, 0.1, PointSource{0.5, 1.0}, 1.0);
    REQUIRE_THAT(v, WithinRel(dirichlet_delta_series(0.5, 0.5, 0.1, 1.0), 1e-12));
    REQUIRE_THAT(v, WithinAbs(0.745693231265, 1e-11));
    for (double u : {0.002, 0.01, 0.05, 0.3}) {
        for (double x : {0.1, 0.37, 0.9}) {
            const double e = dirichlet_interval_semigroup_eigen(x, u, PointSource{0.6, 1.0}, 1.0);
            const double i = dirichlet_interval_semigroup_images(x, u, PointSource{0.6, 1.0}, 1.0);
            REQUIRE_THAT(e, WithinAbs(i, 1e-12));
        }
    }
    const TabulatedDatum bump{{0.2, 0.5, 0.8}, {0.0, 2.0, 0.0}};
    for (double u : {0.01, 0.2}) {
        REQUIRE_THAT(dirichlet_interval_semigroup_eigen(0.4, u, bump, 1.0),
                     WithinAbs(dirichlet_interval_semigroup_images(0.4, u, bump, 1.0), 1e-12));
    }
    REQUIRE(dirichlet_interval_semigroup(0.0, 0.1, PointSource{0.5, 1.0}, 1.0) == 0.0);
    REQUIRE(dirichlet_interval_semigroup(1.0, 0.1, PointSource{0.5, 1.0}, 1.0) == 0.0);
}

TEST_CASE("mixing densities coincide", "[subordination][property]") {
    for (double g : {0.5, 0.75, 0.9}) {
        SubordinationSpec inv;
        inv.gamma = g;
        SubordinationSpec dual = inv;
        dual.route = SubordinationRoute::Dual;
        for (int k = 0; k < 30; ++k) {
            const double u = std::pow(10.0, -1.5 + 2.0 * k / 29.0);
            const double a = mixing_density(inv, u, 1.0);
            if (a < 1e-10) continue;  // deep tail, only absolute agreement is meaningful
            REQUIRE_THAT(mixing_density(dual, u, 1.0), WithinRel(a, 1e-9));
        }
    }
}

TEST_CASE("closed form at gamma = 1/2", "[subordination]") {
    SubordinationSpec s;
    s.gamma = 0.5;
    // int_0^inf K(0, u) h(u, 1) du = Gamma(1/4) / (2 pi sqrt 2)
    const double expected = std::tgamma(0.25) / (2.0 * std::numbers::pi * std::sqrt(2.0));
    REQUIRE_THAT(subordinate(s, 0.0, 1.0), WithinRel(expected, 1e-9));
    SubordinationSpec absy = s;
    absy.route = SubordinationRoute::AbsY;
    for (double x : {-0.7, 0.0, 1.2}) {
        REQUIRE_THAT(subordinate(absy, x, 0.8), WithinRel(subordinate(s, x, 0.8), 1e-9));
    }
}

TEST_CASE("routes agree on the line and on an interval", "[subordination][property]") {
    for (double g : {0.5, 0.75}) {
        SubordinationSpec a;
        a.gamma = g;
        SubordinationSpec b = a;
        b.route = SubordinationRoute::Dual;
        for (double x : {-1.0, 0.0, 0.5}) {
            for (double t : {0.25, 1.0, 2.0}) REQUIRE_THAT(subordinate(a, x, t), WithinAbs(subordinate(b, x, t), 1e-6));
        }
        a.domain = Interval{2.0};
        a.r = PointSource{1.0, 1.0};
        b.domain = a.domain;
        b.r = a.r;
        for (double x : {0.2, 1.0, 1.8}) {
            for (double t : {0.25, 1.0, 2.0}) REQUIRE_THAT(subordinate(a, x, t), WithinAbs(subordinate(b, x, t), 1e-6));
        }
        for (double t : {0.5, 1.5}) {
            REQUIRE(std::abs(subordinate(a, 0.0, t)) <= 1e-8);
            REQUIRE(std::abs(subordinate(b, 2.0, t)) <= 1e-8);
        }
    }
}

TEST_CASE("mass is conserved on the line and decays on an interval", "[subordination][property]") {
    SubordinationSpec s;
    s.gamma = 0.8;
    const QuadratureOptions q{1e-9, 1e-9, 2000};
    REQUIRE_THAT(integrate([&](double x) { return subordinate(s, x, 1.0); }, -30.0, 30.0, q), WithinAbs(1.0, 1e-6));
    s.domain = Interval{1.0};
    s.r = PointSource{0.5, 1.0};
    double prev = 1.0;
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const double m = integrate([&](double x) { return subordinate(s, x, t); }, 0.0, 1.0, q);
        REQUIRE(m < prev);
        prev = m;
    }
}

TEST_CASE("small t recovers the datum", "[subordination]") {
    SubordinationSpec s;
    s.gamma = 0.75;
    s.r = FunctionDatum{[](double y) { return oracle::gauss(y, 0.5); }, -10.0, 10.0};
    for (double x : {-0.5, 0.0, 1.0}) {
        REQUIRE_THAT(subordinate(s, x, 1e-6), WithinAbs(oracle::gauss(x, 0.5), 1e-3));
    }
}

TEST_CASE("validation", "[subordination]") {
    SubordinationSpec s;
    s.gamma = 0.75;
    s.route = SubordinationRoute::AbsY;
    const auto r = validate(s);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.violation.find("gamma = 1/2") != std::string::npos);
    REQUIRE_THROWS_AS(subordinate(s, 0.0, 1.0), Error);
    s.route = SubordinationRoute::Dual;
    s.gamma = 0.4;
    REQUIRE_FALSE(validate(s).ok);
    s.gamma = 0.75;
    s.domain = Interval{-1.0};
    REQUIRE_FALSE(validate(s).ok);
    REQUIRE(parse_subordination_route("abs-y") == SubordinationRoute::AbsY);
    REQUIRE_FALSE(parse_subordination_route("both").has_value());
}
