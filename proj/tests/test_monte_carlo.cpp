#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "catch_amalgamated.hpp"
#include "fracdual/inverse_subordinator.hpp"
#include "fracdual/monte_carlo.hpp"

using namespace fracdual;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("Kolmogorov-Smirnov distance", "[monte_carlo]") {
    const std::size_t n = 1000;
    std::vector<double> q;
    for (std::size_t k = 1; k <= n; ++k) q.push_back((static_cast<double>(k) - 0.5) / static_cast<double>(n));
    REQUIRE_THAT(ks_statistic(q, uniform_cdf), WithinAbs(0.5 / static_cast<double>(n), 1e-15));
    REQUIRE_THAT(ks_statistic({0.5}, uniform_cdf), WithinAbs(0.5, 1e-15));
    REQUIRE(ks_two_sample(q, q) == 0.0);
    REQUIRE(ks_two_sample({1.0, 2.0}, {3.0, 4.0}) == 1.0);
    REQUIRE_THROWS_AS(ks_statistic({}, uniform_cdf), Error);
}

TEST_CASE("uniform samples pass at the 1% level", "[monte_carlo][property]") {
    const std::size_t n = 10000;
    int passed = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = particle_rng(seed, i);
            s[i] = open_uniform(rng);
        }
        if (ks_statistic(s, uniform_cdf) < 1.63 / std::sqrt(static_cast<double>(n))) ++passed;
    }
    REQUIRE(passed >= 99);
}

TEST_CASE("generator matches the stable density", "[monte_carlo]") {
    const std::size_t n = 20000;
    for (const auto& p : {zolotarev(2.0, 0.0, 1.0), zolotarev(1.5, 0.3, 2.0), zolotarev(1.2, -0.8, 1.0),
                          zolotarev(0.7, 0.7, 1.0), zolotarev(0.6, -0.2, 0.5)}) {
        const StableSampler draw(p);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = particle_rng(99, i);
            s[i] = draw(rng);
        }
        // condition on the central 99% and integrate the density between consecutive sorted draws
        std::sort(s.begin(), s.end());
        const std::vector<double> inner(s.begin() + n / 200, s.end() - n / 200);
        std::vector<double> F(inner.size(), 0.0);
        const QuadratureOptions q{1e-12, 1e-10, 200};
        for (std::size_t i = 1; i < inner.size(); ++i) {
            F[i] = F[i - 1] + integrate([&](double x) { return density(x, p); }, inner[i - 1], inner[i], q);
        }
        const double inner_mass = F.back();
        const double d = ks_statistic(inner, [&](double x) {
            const auto k = static_cast<std::size_t>(std::lower_bound(inner.begin(), inner.end(), x) - inner.begin());
            return F[std::min(k, F.size() - 1)] / inner_mass;
        });
        INFO("alpha " << p.alpha << " eta " << p.asym);
        REQUIRE(d < 1.63 / std::sqrt(static_cast<double>(inner.size())));
    }
}

TEST_CASE("positive draws of the spectrally negative law", "[monte_carlo]") {
    REQUIRE_NOTHROW(check_sign_convention(1.5));
    Ensemble cfg;
    cfg.n = 100000;
    const auto e = simulate_Y_conditional(1.5, 1.0, 1.0, cfg);
    const double p = 2.0 / 3.0;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.n));
    REQUIRE_THAT(static_cast<double>(e.accepted) / static_cast<double>(cfg.n), WithinAbs(p, 3.0 * se));
    for (double v : e.samples) REQUIRE(v > 0.0);
}

TEST_CASE("subordinator increments are positive", "[monte_carlo][property]") {
    for (double g : {0.3, 0.5, 0.8, 0.95}) {
        const StableSampler draw(subordinator_law(g, 1e-3));
        for (std::size_t i = 0; i < 20000; ++i) {
            Rng rng = particle_rng(1, i);
            REQUIRE(draw(rng) > 0.0);
        }
    }
}

TEST_CASE("same seed gives the same samples for any thread count", "[monte_carlo][property]") {
    Ensemble cfg;
    cfg.n = 3000;
    cfg.seed = 42;
    setenv("FRACDUAL_THREADS", "1", 1);
    const auto z1 = simulate_Z(1.5, 1.0, 1.0, cfg);
    const auto e1 = simulate_E(0.7, 1.0, {0.5, 1.0}, cfg);
    setenv("FRACDUAL_THREADS", "3", 1);
    const auto z3 = simulate_Z(1.5, 1.0, 1.0, cfg);
    const auto e3 = simulate_E(0.7, 1.0, {0.5, 1.0}, cfg);
    unsetenv("FRACDUAL_THREADS");
    REQUIRE(z1.samples == z3.samples);
    REQUIRE(e1[0].samples == e3[0].samples);
    REQUIRE(e1[1].samples == e3[1].samples);
    cfg.seed = 43;
    REQUIRE(simulate_Z(1.5, 1.0, 1.0, cfg).samples != z1.samples);
}

TEST_CASE("E at gamma = 1/2 is half-normal", "[monte_carlo]") {
    Ensemble cfg;
    cfg.n = 20000;
    const auto runs = simulate_E(0.5, 1.0, {0.5, 1.0}, cfg);
    for (std::size_t k = 0; k < 2; ++k) {
        const double t = k == 0 ? 0.5 : 1.0;
        const double d = ks_statistic(runs[k].samples, [t](double x) { return std::erf(x / (2.0 * std::sqrt(t))); });
        REQUIRE(d < 0.015);
        const double mean = inverse_mean(InverseDensitySpec::make(0.5, 1.0, t));
        REQUIRE_THAT(mean_of(runs[k].samples), WithinRel(mean, 0.02));
    }
}

TEST_CASE("Z at alpha = 1.5 follows h", "[monte_carlo]") {
    Ensemble cfg;
    cfg.n = 20000;
    cfg.dt_walk = 0.02;
    const auto z = simulate_Z(1.5, 1.0, 1.0, cfg);
    REQUIRE(z.accepted >= cfg.n - cfg.n / 1000);  // a few walks hit the step cap
    const auto cdf = h_cdf(InverseDensitySpec::make(1.0 / 1.5, 1.0, 1.0));
    REQUIRE(ks_statistic(z.samples, [&](double x) { return cdf(x); }) < 0.02);
}

TEST_CASE("input checks", "[monte_carlo]") {
    Ensemble cfg;
    cfg.n = 0;
    REQUIRE_THROWS_AS(simulate_Z(1.5, 1.0, 1.0, cfg), Error);
    cfg.n = 10;
    REQUIRE_THROWS_AS(simulate_Z(0.9, 1.0, 1.0, cfg), Error);
    REQUIRE_THROWS_AS(simulate_E(1.2, 1.0, {1.0}, cfg), Error);
    REQUIRE_THROWS_AS(simulate_E(0.5, 1.0, {2.0, 1.0}, cfg), Error);
    REQUIRE_THROWS_AS(simulate_Y_conditional(1.5, -1.0, 1.0, cfg), Error);
    REQUIRE(ks_two_sample_critical(100, 100) > ks_two_sample_critical(1000, 1000));
}
