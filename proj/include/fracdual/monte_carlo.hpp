#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fracdual/error.hpp"
#include "fracdual/stable_params.hpp"

namespace fracdual {

struct Ensemble {
    std::uint64_t seed = 7;
    std::size_t n = 100000;
    double dt_walk = 0.05;    // time step of the Y walk
    double dx_path = 1e-3;    // spatial increment of the D path
    std::size_t max_walk_steps = 50'000'000;  // per particle; exceeding drops the particle
    std::vector<double> samples;
    std::size_t accepted = 0;
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream for one particle, fixed by (seed, index) alone.
inline Rng particle_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

/// Uniform on the open interval (0, 1).
inline double open_uniform(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Exact stable variates by the trigonometric transformation of a uniform angle and an
/// exponential variable (alpha != 1), constants precomputed once per law.
class StableSampler {
public:
    explicit StableSampler(const StableParams& p) {
        const StableParams st = convert(p, Parametrization::StBeta);
        alpha_ = st.alpha;
        sigma_ = st.scale;
        const double tan_term = alpha_ == 2.0 ? 0.0 : st.asym * std::tan(std::numbers::pi * alpha_ / 2.0);
        shift_ = std::atan(tan_term) / alpha_;
        factor_ = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha_));
        inv_alpha_ = 1.0 / alpha_;
        tail_power_ = (1.0 - alpha_) / alpha_;
    }

    double operator()(Rng& rng) const {
        const double u = std::numbers::pi * (open_uniform(rng) - 0.5);
        const double w = -std::log(open_uniform(rng));
        const double a_ub = alpha_ * (u + shift_);
        const double x = factor_ * std::sin(a_ub) / std::pow(std::cos(u), inv_alpha_) *
                         std::pow(std::cos(u - a_ub) / w, tail_power_);
        return sigma_ * x;
    }

    double alpha() const { return alpha_; }

private:
    double alpha_ = 2.0;
    double sigma_ = 1.0;
    double shift_ = 0.0;
    double factor_ = 1.0;
    double inv_alpha_ = 0.5;
    double tail_power_ = -0.5;
};

inline double sample_stable(const StableParams& params, Rng& rng) {
    return StableSampler(params)(rng);
}

/// Laws used by the simulators, in eta form.
inline StableParams subordinator_law(double gamma, double scale) { return zolotarev(gamma, gamma, scale); }
inline StableParams spectrally_negative_law(double alpha, double scale) {
    return zolotarev(alpha, 2.0 - alpha, scale);
}

inline unsigned thread_count() {
    if (const char* env = std::getenv("FRACDUAL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// body(i) for i in [0, n), split into contiguous blocks over the worker threads.
/// The body must only write to slots owned by index i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t lo = w * block;
                const std::size_t hi = std::min(n, lo + block);
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace detail {

inline void check_ensemble(const Ensemble& e) {
    if (e.n < 1) throw Error(ErrorCode::InvalidArgument, "particle count must be >= 1");
}

inline void check_index(double alpha) {
    if (!(alpha > 1.0) || alpha > 2.0) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (1, 2]");
}

}  // namespace detail

/// Fraction of positive draws of the spectrally negative law must be near 1/alpha.
/// Guards against a flipped skewness convention in the generator.
inline void check_sign_convention(double alpha) {
    constexpr std::size_t n = 10000;
    const StableSampler draw(spectrally_negative_law(alpha, 1.0));
    std::size_t positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = particle_rng(0x5EED, i);
        if (draw(rng) > 0.0) ++positive;
    }
    const double p = 1.0 / alpha;
    const double frac = static_cast<double>(positive) / static_cast<double>(n);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    if (std::abs(frac - p) > 3.0 * se + 1e-12) {
        throw std::logic_error("stable generator skewness convention check failed: positive fraction " +
                               std::to_string(frac) + " vs " + std::to_string(p));
    }
}

/// E_t at each target time by inverting the D path t_i = sum of subordinator increments
/// over steps of dx_path, interpolating linearly in t. One ensemble per target.
inline std::vector<Ensemble> simulate_E(double gamma, double b, std::vector<double> t_targets,
                                        const Ensemble& cfg) {
    detail::check_ensemble(cfg);
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "b must be > 0");
    if (!(cfg.dx_path > 0.0)) throw Error(ErrorCode::InvalidArgument, "dx_path must be > 0");
    if (t_targets.empty()) throw Error(ErrorCode::InvalidArgument, "no target times");
    for (double t : t_targets) {
        if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "target times must be > 0");
    }
    if (!std::is_sorted(t_targets.begin(), t_targets.end())) {
        throw Error(ErrorCode::InvalidArgument, "target times must be sorted");
    }
    const StableSampler draw(subordinator_law(gamma, b * cfg.dx_path));
    const std::size_t m = t_targets.size();
    std::vector<double> flat(cfg.n * m);
    parallel_for(cfg.n, [&](std::size_t i) {
        Rng rng = particle_rng(cfg.seed, i);
        double x = 0.0;
        double t = 0.0;
        std::size_t next = 0;
        while (next < m) {
            const double inc = draw(rng);
            const double t_new = t + inc;
            while (next < m && t_targets[next] <= t_new) {
                flat[i * m + next] = x + cfg.dx_path * (t_targets[next] - t) / inc;
                ++next;
            }
            t = t_new;
            x += cfg.dx_path;
        }
    });
    std::vector<Ensemble> out(m, cfg);
    for (std::size_t k = 0; k < m; ++k) {
        out[k].samples.resize(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) out[k].samples[i] = flat[i * m + k];
        out[k].accepted = cfg.n;
    }
    return out;
}

/// Exact draws of Y(t) with law (alpha, 2 - alpha, b^{-alpha} t), positives retained.
inline Ensemble simulate_Y_conditional(double alpha, double b, double t, const Ensemble& cfg) {
    detail::check_ensemble(cfg);
    detail::check_index(alpha);
    if (!(b > 0.0) || !(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "b and t must be > 0");
    check_sign_convention(alpha);
    const StableSampler draw(spectrally_negative_law(alpha, std::pow(b, -alpha) * t));
    std::vector<double> all(cfg.n);
    parallel_for(cfg.n, [&](std::size_t i) {
        Rng rng = particle_rng(cfg.seed, i);
        all[i] = draw(rng);
    });
    Ensemble out = cfg;
    out.samples.clear();
    for (double y : all) {
        if (y > 0.0) out.samples.push_back(y);
    }
    out.accepted = out.samples.size();
    return out;
}

/// Walk of Y with step dt_walk run on its positive-occupation clock: the clock advances
/// by dt_walk at each step that lands above 0, and the position is returned once the
/// clock reaches t.
inline Ensemble simulate_Z(double alpha, double b, double t, const Ensemble& cfg) {
    detail::check_ensemble(cfg);
    detail::check_index(alpha);
    if (!(b > 0.0) || !(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "b and t must be > 0");
    if (!(cfg.dt_walk > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt_walk must be > 0");
    check_sign_convention(alpha);
    const StableSampler draw(spectrally_negative_law(alpha, std::pow(b, -alpha) * cfg.dt_walk));
    const auto needed = static_cast<std::size_t>(std::ceil(t / cfg.dt_walk - 1e-9));
    const double dropped = -1.0;
    std::vector<double> all(cfg.n, dropped);
    parallel_for(cfg.n, [&](std::size_t i) {
        Rng rng = particle_rng(cfg.seed, i);
        double y = 0.0;
        std::size_t positive = 0;
        for (std::size_t step = 0; step < cfg.max_walk_steps; ++step) {
            y += draw(rng);
            if (y > 0.0 && ++positive >= needed) {
                all[i] = y;
                return;
            }
        }
    });
    Ensemble out = cfg;
    out.samples.clear();
    for (double z : all) {
        if (z > 0.0) out.samples.push_back(z);
    }
    out.accepted = out.samples.size();
    return out;
}

/// One-sample Kolmogorov-Smirnov distance; samples are sorted internally.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Asymptotic 1% critical value of the two-sample statistic.
inline double ks_two_sample_critical(std::size_t n, std::size_t m) {
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    return 1.628 * std::sqrt((nd + md) / (nd * md));
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace fracdual
