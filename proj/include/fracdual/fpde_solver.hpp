#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdual/error.hpp"
#include "fracdual/numerics.hpp"
#include "fracdual/stable_params.hpp"

namespace fracdual {

/// Coefficients of dp/dt = q a D^delta_{-x} p + (1 - q) a D^delta_{x} p.
struct TwoSided {
    double q = 0.5;
    double delta = 2.0;
    double a = 1.0;
};

struct SolverConfig {
    double alpha = 1.5;
    double b = 1.0;
    double dx = 0.1;
    double dt = 0.01;
    double x_max = 6.0;
    double t_end = 1.0;
    std::size_t weights_cap = 0;  // 0 = full grid width
    std::optional<TwoSided> two_sided;
};

/// Uniform grid of density samples; node i sits at x0 + i dx.
struct DensityGrid {
    double x0 = 0.0;
    double dx = 1.0;
    double t = 0.0;
    std::vector<double> values;

    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
    std::size_t size() const { return values.size(); }
    double mass() const {
        CompensatedSum<> s;
        for (double v : values) s.add(v);
        return s.value() * dx;
    }
};

namespace detail {

inline bool near_integer(double ratio) {
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
}

inline std::size_t steps_of(double extent, double step) {
    return static_cast<std::size_t>(std::llround(extent / step));
}

}  // namespace detail

/// w_n = (-1)^n C(order, n), n = 0..n_max.
inline std::vector<double> grunwald_weights(double order, std::size_t n_max) {
    std::vector<double> w(n_max + 1);
    w[0] = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        w[n] = w[n - 1] * (nd - 1.0 - order) / nd;
    }
    return w;
}

/// Largest stable time step: the diagonal coefficient stays nonnegative.
inline double cfl_limit(const SolverConfig& cfg) {
    if (cfg.two_sided) {
        const auto& ts = *cfg.two_sided;
        return std::pow(cfg.dx, ts.delta) / (ts.a * ts.delta);
    }
    return std::pow(cfg.b * cfg.dx, cfg.alpha) / cfg.alpha;
}

inline ValidationReport validate(const SolverConfig& cfg) {
    if (!cfg.two_sided) {
        if (!(cfg.alpha > 1.0) || cfg.alpha > 2.0) return {false, "alpha must lie in (1, 2]"};
    }
    if (!(cfg.b > 0.0) || !std::isfinite(cfg.b)) return {false, "b must be > 0"};
    if (!(cfg.dx > 0.0) || !std::isfinite(cfg.dx)) return {false, "dx must be > 0"};
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) return {false, "dt must be > 0"};
    if (!(cfg.x_max > 0.0) || !std::isfinite(cfg.x_max)) return {false, "x_max must be > 0"};
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) return {false, "t_end must be > 0"};
    if (!detail::near_integer(cfg.x_max / cfg.dx)) return {false, "x_max / dx must be an integer"};
    if (!detail::near_integer(cfg.t_end / cfg.dt)) return {false, "t_end / dt must be an integer"};
    if (detail::steps_of(cfg.x_max, cfg.dx) < 2) return {false, "grid needs at least 3 nodes"};
    if (cfg.two_sided) {
        const auto& ts = *cfg.two_sided;
        if (ts.q < 0.0 || ts.q > 1.0) return {false, "q must lie in [0, 1]"};
        if (!(ts.delta > 1.0) || ts.delta > 2.0) return {false, "two-sided solver needs delta in (1, 2]"};
        if (!(ts.a > 0.0) || !std::isfinite(ts.a)) return {false, "a must be > 0 for delta in (1, 2]"};
    }
    return {};
}

inline void require_valid(const SolverConfig& cfg) {
    if (auto r = validate(cfg); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
}

inline void require_stable(const SolverConfig& cfg) {
    const double limit = cfl_limit(cfg);
    if (cfg.dt > limit * (1.0 + 1e-12)) {
        throw Error(ErrorCode::CflViolation, "dt = " + fmt_sci(cfg.dt) +
                                                 " exceeds the stability limit " + fmt_sci(limit));
    }
}

/// Time step rounded down from the stability limit so that t_end is an even number of steps.
inline double even_step_dt(const SolverConfig& cfg) {
    auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfl_limit(cfg) - 1e-9));
    steps = std::max<std::size_t>(steps, 2);
    if (steps % 2 == 1) ++steps;
    return cfg.t_end / static_cast<double>(steps);
}

/// Point source on the half-line grid. Node 0 is a ghost at -dx that carries the boundary
/// row; node 1 is x = 0 and holds the unit mass.
inline DensityGrid point_source_grid(const SolverConfig& cfg) {
    require_valid(cfg);
    DensityGrid g;
    g.dx = cfg.dx;
    g.x0 = -cfg.dx;
    g.t = 0.0;
    g.values.assign(detail::steps_of(cfg.x_max, cfg.dx) + 2, 0.0);
    g.values[1] = 1.0 / cfg.dx;
    return g;
}

/// h_0 = -sum_{n >= 1} v_n h_n with v the order (alpha - 1) weights, so that the discrete
/// order (alpha - 1) derivative vanishes at the boundary.
inline DensityGrid apply_boundary(const DensityGrid& grid, const SolverConfig& cfg) {
    DensityGrid out = grid;
    const std::size_t n = grid.size();
    if (n < 2) return out;
    std::size_t reach = n - 1;
    if (cfg.weights_cap > 0) reach = std::min(reach, cfg.weights_cap);
    const auto v = grunwald_weights(cfg.alpha - 1.0, reach);
    CompensatedSum<> s;
    for (std::size_t k = 1; k <= reach; ++k) s.add(v[k] * grid.values[k]);
    out.values[0] = -s.value();
    return out;
}

/// One explicit Euler step of h_t = (b dx)^{-alpha} sum_n w_n h_{i+n-1} for i >= 1,
/// values beyond the right edge taken as zero, then the boundary row.
inline DensityGrid step_explicit_euler(const DensityGrid& grid, const SolverConfig& cfg) {
    require_stable(cfg);
    if (grid.size() < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 nodes");
    const std::size_t n = grid.size();
    std::size_t reach = n;
    if (cfg.weights_cap > 0) reach = std::min(reach, cfg.weights_cap);
    const auto w = grunwald_weights(cfg.alpha, reach);
    const double c = cfg.dt * std::pow(cfg.b * grid.dx, -cfg.alpha);
    DensityGrid next = grid;
    next.t = grid.t + cfg.dt;
    for (std::size_t i = 1; i < n; ++i) {
        CompensatedSum<> s;
        const std::size_t top = std::min(reach, n - i);  // i + k - 1 <= n - 1
        for (std::size_t k = 0; k <= top; ++k) s.add(w[k] * grid.values[i + k - 1]);
        next.values[i] = grid.values[i] + c * s.value();
    }
    return apply_boundary(next, cfg);
}

/// Point-source solution of the boundary value problem at t_end. When every > 0 the
/// callback receives the grid after each block of that many steps.
inline DensityGrid solve_bvp(const SolverConfig& cfg,
                             const std::function<void(const DensityGrid&)>& observer = {},
                             std::size_t every = 0) {
    require_valid(cfg);
    if (cfg.two_sided) throw Error(ErrorCode::InvalidArgument, "use solve_two_sided for two-sided runs");
    require_stable(cfg);
    DensityGrid g = apply_boundary(point_source_grid(cfg), cfg);
    const std::size_t steps = detail::steps_of(cfg.t_end, cfg.dt);
    for (std::size_t j = 1; j <= steps; ++j) {
        g = step_explicit_euler(g, cfg);
        if (observer && every > 0 && j % every == 0) observer(g);
    }
    g.t = cfg.t_end;
    return g;
}

/// 2 fine - coarse at shared nodes; the correction (coarse - fine) is interpolated linearly
/// between shared nodes and held constant beyond them.
inline DensityGrid richardson_extrapolate(const DensityGrid& fine, const DensityGrid& coarse) {
    if (!approx_equal(coarse.dx, 2.0 * fine.dx, 1e-12)) {
        throw Error(ErrorCode::GridMismatch, "coarse step must be twice the fine step");
    }
    if (std::abs(fine.t - coarse.t) > 1e-9 * std::max(1.0, std::abs(fine.t))) {
        throw Error(ErrorCode::GridMismatch, "grids are at different times");
    }
    const double offset = (coarse.x0 - fine.x0) / fine.dx;
    if (!detail::near_integer(offset)) {
        throw Error(ErrorCode::GridMismatch, "coarse nodes are not fine nodes");
    }
    const long shift = std::lround(offset);
    // Shared nodes: fine index = shift + 2 j.
    std::vector<std::pair<std::size_t, double>> corrections;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        const long i = shift + 2 * static_cast<long>(j);
        if (i < 0 || i >= static_cast<long>(fine.size())) continue;
        corrections.emplace_back(static_cast<std::size_t>(i),
                                 coarse.values[j] - fine.values[static_cast<std::size_t>(i)]);
    }
    if (corrections.empty()) throw Error(ErrorCode::GridMismatch, "grids share no nodes");
    DensityGrid out = fine;
    std::size_t seg = 0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        double corr;
        if (i <= corrections.front().first) {
            corr = corrections.front().second;
        } else if (i >= corrections.back().first) {
            corr = corrections.back().second;
        } else {
            while (corrections[seg + 1].first < i) ++seg;
            const auto [i0, c0] = corrections[seg];
            const auto [i1, c1] = corrections[seg + 1];
            const double f = static_cast<double>(i - i0) / static_cast<double>(i1 - i0);
            corr = c0 + f * (c1 - c0);
        }
        out.values[i] = fine.values[i] - corr;
    }
    return out;
}

/// Two-sided equation on [-x_max, x_max] with zero padding outside, point source at 0.
inline DensityGrid solve_two_sided(const SolverConfig& cfg) {
    require_valid(cfg);
    if (!cfg.two_sided) throw Error(ErrorCode::InvalidArgument, "two-sided coefficients missing");
    require_stable(cfg);
    const auto& ts = *cfg.two_sided;
    const std::size_t half = detail::steps_of(cfg.x_max, cfg.dx);
    const std::size_t n = 2 * half + 1;
    DensityGrid g;
    g.x0 = -cfg.x_max;
    g.dx = cfg.dx;
    g.values.assign(n, 0.0);
    g.values[half] = 1.0 / cfg.dx;
    std::size_t reach = n;
    if (cfg.weights_cap > 0) reach = std::min(reach, cfg.weights_cap);
    const auto w = grunwald_weights(ts.delta, reach);
    const double c = cfg.dt * ts.a * std::pow(cfg.dx, -ts.delta);
    const std::size_t steps = detail::steps_of(cfg.t_end, cfg.dt);
    std::vector<double> next(n);
    for (std::size_t j = 0; j < steps; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            CompensatedSum<> left;   // sum_k w_k p[i + k - 1]
            CompensatedSum<> right;  // sum_k w_k p[i - k + 1]
            for (std::size_t k = 0; k <= reach; ++k) {
                const long up = static_cast<long>(i + k) - 1;
                const long down = static_cast<long>(i) - static_cast<long>(k) + 1;
                if (up >= 0 && up < static_cast<long>(n)) left.add(w[k] * g.values[static_cast<std::size_t>(up)]);
                if (down >= 0 && down < static_cast<long>(n)) right.add(w[k] * g.values[static_cast<std::size_t>(down)]);
                if (up >= static_cast<long>(n) && down < 0) break;
            }
            next[i] = g.values[i] + c * (ts.q * left.value() + (1.0 - ts.q) * right.value());
        }
        g.values.swap(next);
    }
    g.t = cfg.t_end;
    return g;
}

struct ResidualField {
    std::vector<double> xs;
    std::vector<double> ts;
    std::vector<double> values;  // row-major: values[it * xs.size() + ix]

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// b * (L1 Caputo derivative in t) + (central difference in x) of field(x, t).
/// Each probe time must be a multiple of dt_mesh; field(x, 0) supplies the initial value.
inline ResidualField caputo_residual(const std::function<double(double, double)>& field, double gamma,
                                     double b, const std::vector<double>& xs,
                                     const std::vector<double>& ts, double dt_mesh, double dx_mesh) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
    if (!(dt_mesh > 0.0) || !(dx_mesh > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh steps must be > 0");
    ResidualField out{xs, ts, {}};
    out.values.reserve(xs.size() * ts.size());
    const double scale = std::pow(dt_mesh, -gamma) / std::tgamma(2.0 - gamma);
    for (double t : ts) {
        if (!detail::near_integer(t / dt_mesh)) {
            throw Error(ErrorCode::InvalidArgument, "probe time is not on the time mesh");
        }
        const std::size_t m = detail::steps_of(t, dt_mesh);
        std::vector<double> bk(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double kd = static_cast<double>(k);
            bk[k] = std::pow(kd + 1.0, 1.0 - gamma) - std::pow(kd, 1.0 - gamma);
        }
        for (double x : xs) {
            std::vector<double> f(m + 1);
            for (std::size_t j = 0; j <= m; ++j) f[j] = field(x, dt_mesh * static_cast<double>(j));
            CompensatedSum<> s;
            for (std::size_t k = 0; k < m; ++k) s.add(bk[k] * (f[m - k] - f[m - k - 1]));
            const double caputo = scale * s.value();
            const double dfdx = (field(x + dx_mesh, t) - field(x - dx_mesh, t)) / (2.0 * dx_mesh);
            out.values.push_back(b * caputo + dfdx);
        }
    }
    return out;
}

}  // namespace fracdual
