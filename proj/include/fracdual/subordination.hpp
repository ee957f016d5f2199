#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracdual/error.hpp"
#include "fracdual/inverse_subordinator.hpp"
#include "fracdual/numerics.hpp"
#include "fracdual/stable_density.hpp"

namespace fracdual {

/// Unit (or weighted) point mass at x0.
struct PointSource {
    double x0 = 0.0;
    double mass = 1.0;
};

/// Piecewise-linear datum through (xs[i], values[i]), zero outside [xs.front(), xs.back()].
struct TabulatedDatum {
    std::vector<double> xs;
    std::vector<double> values;
};

/// Arbitrary integrable datum supported in [lo, hi].
struct FunctionDatum {
    std::function<double(double)> f;
    double lo = 0.0;
    double hi = 1.0;
};

using Datum = std::variant<PointSource, TabulatedDatum, FunctionDatum>;

struct FreeLine {};
struct Interval {
    double length = 1.0;
};
using Domain = std::variant<FreeLine, Interval>;

enum class SubordinationRoute {
    Inverse,  // m = int p(x, u) h(u, t) du
    Dual,     // m = (1/gamma) int p(x, u) p_{1/gamma}(u; 2 - 1/gamma, t) du
    AbsY      // gamma = 1/2 only: mixing by the law of |Y(t)|
};

inline const char* to_string(SubordinationRoute r) noexcept {
    switch (r) {
        case SubordinationRoute::Inverse: return "inverse";
        case SubordinationRoute::Dual: return "dual";
        case SubordinationRoute::AbsY: return "abs-y";
    }
    return "unknown";
}

inline std::optional<SubordinationRoute> parse_subordination_route(std::string_view name) {
    if (name == "inverse") return SubordinationRoute::Inverse;
    if (name == "dual") return SubordinationRoute::Dual;
    if (name == "abs-y") return SubordinationRoute::AbsY;
    return std::nullopt;
}

struct SubordinationSpec {
    double gamma = 0.75;
    Domain domain = FreeLine{};
    Datum r = PointSource{};
    SubordinationRoute route = SubordinationRoute::Inverse;
    QuadratureOptions quad{1e-11, 1e-10, 4000};
};

namespace detail {

inline constexpr double kInvSqrtPi = 0.56418958354775628695;

inline void check_tabulated(const TabulatedDatum& d) {
    if (d.xs.size() < 2 || d.xs.size() != d.values.size()) {
        throw Error(ErrorCode::InvalidArgument, "tabulated datum needs matching xs/values with >= 2 nodes");
    }
    for (std::size_t i = 0; i + 1 < d.xs.size(); ++i) {
        if (!(d.xs[i] < d.xs[i + 1])) throw Error(ErrorCode::InvalidArgument, "tabulated xs must increase");
    }
}

// int_{y0}^{y1} K(x - y, u) (A + B y) dy with K the heat kernel of d/du = d^2/dx^2.
inline double heat_linear_segment(double x, double u, double y0, double y1, double a, double b) {
    const double w = std::sqrt(4.0 * u);
    const double z0 = (y0 - x) / w;
    const double z1 = (y1 - x) / w;
    const double erf_part = 0.5 * (a + b * x) * (std::erf(z1) - std::erf(z0));
    const double exp_part = 0.5 * b * w * kInvSqrtPi * (std::exp(-z0 * z0) - std::exp(-z1 * z1));
    return erf_part + exp_part;
}

inline double heat_kernel(double z, double u) {
    return std::exp(-z * z / (4.0 * u)) / std::sqrt(4.0 * std::numbers::pi * u);
}

}  // namespace detail

inline double datum_mass(const Datum& r) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointSource>) {
                return d.mass;
            } else if constexpr (std::is_same_v<T, TabulatedDatum>) {
                detail::check_tabulated(d);
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < d.xs.size(); ++i) {
                    s += 0.5 * (d.values[i] + d.values[i + 1]) * (d.xs[i + 1] - d.xs[i]);
                }
                return s;
            } else {
                return integrate(d.f, d.lo, d.hi);
            }
        },
        r);
}

/// Free-line heat semigroup p(x, u) = int K(x - y, u) r(y) dy.
inline double heat_semigroup(double x, double u, const Datum& r) {
    if (!(u > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffusion time u must be > 0");
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointSource>) {
                return d.mass * detail::heat_kernel(x - d.x0, u);
            } else if constexpr (std::is_same_v<T, TabulatedDatum>) {
                detail::check_tabulated(d);
                CompensatedSum<> s;
                for (std::size_t i = 0; i + 1 < d.xs.size(); ++i) {
                    const double y0 = d.xs[i], y1 = d.xs[i + 1];
                    const double slope = (d.values[i + 1] - d.values[i]) / (y1 - y0);
                    s.add(detail::heat_linear_segment(x, u, y0, y1, d.values[i] - slope * y0, slope));
                }
                return s.value();
            } else {
                // y = x + w z, so the kernel is exp(-z^2)/sqrt(pi) whatever u is
                const double w = std::sqrt(4.0 * u);
                const double zlo = std::max((d.lo - x) / w, -9.0);
                const double zhi = std::min((d.hi - x) / w, 9.0);
                if (!(zlo < zhi)) return 0.0;
                std::vector<double> breaks{zlo};
                if (zlo < 0.0 && 0.0 < zhi) breaks.push_back(0.0);
                breaks.push_back(zhi);
                auto g = [&](double z) { return std::exp(-z * z) * detail::kInvSqrtPi * d.f(x + w * z); };
                return integrate_panels(g, breaks, QuadratureOptions{1e-14, 1e-12, 4000});
            }
        },
        r);
}

namespace detail {

inline void check_interval(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::InvalidArgument, "interval length must be > 0");
    }
}

// <phi_n, r> with phi_n(y) = sqrt(2/L) sin(n pi y / L), datum restricted to (0, L).
inline double sine_coefficient(int n, double length, const Datum& r) {
    const double k = n * std::numbers::pi / length;
    const double norm = std::sqrt(2.0 / length);
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointSource>) {
                if (!(d.x0 > 0.0 && d.x0 < length)) return 0.0;
                return d.mass * norm * std::sin(k * d.x0);
            } else if constexpr (std::is_same_v<T, TabulatedDatum>) {
                CompensatedSum<> s;
                // antiderivative of (A + B y) sin(k y)
                auto prim = [k](double y, double a, double b) {
                    return -(a + b * y) * std::cos(k * y) / k + b * std::sin(k * y) / (k * k);
                };
                for (std::size_t i = 0; i + 1 < d.xs.size(); ++i) {
                    const double y0 = std::max(d.xs[i], 0.0);
                    const double y1 = std::min(d.xs[i + 1], length);
                    if (!(y0 < y1)) continue;
                    const double slope = (d.values[i + 1] - d.values[i]) / (d.xs[i + 1] - d.xs[i]);
                    const double a = d.values[i] - slope * d.xs[i];
                    s.add(prim(y1, a, slope) - prim(y0, a, slope));
                }
                return norm * s.value();
            } else {
                const double lo = std::max(d.lo, 0.0);
                const double hi = std::min(d.hi, length);
                if (!(lo < hi)) return 0.0;
                auto g = [&](double y) { return std::sin(k * y) * d.f(y); };
                const auto panels = static_cast<std::size_t>(std::max(4, 2 * n));
                return norm * integrate_panels(g, linspace(lo, hi, panels + 1), QuadratureOptions{1e-14, 1e-12, 4000});
            }
        },
        r);
}

inline Datum restrict_to_interval(const Datum& r, double length) {
    if (const auto* p = std::get_if<PointSource>(&r)) {
        if (!(p->x0 > 0.0 && p->x0 < length)) return PointSource{0.5 * length, 0.0};
        return r;
    }
    if (const auto* f = std::get_if<FunctionDatum>(&r)) {
        return FunctionDatum{f->f, std::max(f->lo, 0.0), std::min(f->hi, length)};
    }
    const auto& t = std::get<TabulatedDatum>(r);
    check_tabulated(t);
    auto value_at = [&](double y) {
        if (y <= t.xs.front() || y >= t.xs.back()) return 0.0;
        const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), y);
        const std::size_t i = static_cast<std::size_t>(it - t.xs.begin()) - 1;
        const double f = (y - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
        return t.values[i] + f * (t.values[i + 1] - t.values[i]);
    };
    TabulatedDatum out;
    const double lo = std::max(t.xs.front(), 0.0);
    const double hi = std::min(t.xs.back(), length);
    if (!(lo < hi)) return PointSource{0.5 * length, 0.0};
    out.xs.push_back(lo);
    out.values.push_back(value_at(lo));
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
        if (t.xs[i] > lo && t.xs[i] < hi) {
            out.xs.push_back(t.xs[i]);
            out.values.push_back(t.values[i]);
        }
    }
    out.xs.push_back(hi);
    out.values.push_back(value_at(hi));
    return out;
}

}  // namespace detail

/// Dirichlet heat semigroup on (0, L) by its sine expansion.
inline double dirichlet_interval_semigroup_eigen(double x, double u, const Datum& r, double length) {
    detail::check_interval(length);
    if (!(u > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffusion time u must be > 0");
    if (!(x > 0.0 && x < length)) return 0.0;
    const Datum rr = detail::restrict_to_interval(r, length);
    double mass_bound = 0.0;
    if (const auto* p = std::get_if<PointSource>(&rr)) {
        mass_bound = std::abs(p->mass);
    } else if (const auto* t = std::get_if<TabulatedDatum>(&rr)) {
        for (std::size_t i = 0; i + 1 < t->xs.size(); ++i) {
            mass_bound += 0.5 * (std::abs(t->values[i]) + std::abs(t->values[i + 1])) * (t->xs[i + 1] - t->xs[i]);
        }
    } else {
        const auto& f = std::get<FunctionDatum>(rr);
        mass_bound = integrate([&](double y) { return std::abs(f.f(y)); }, f.lo, f.hi);
    }
    const double norm = std::sqrt(2.0 / length);
    const double rate = std::numbers::pi * std::numbers::pi * u / (length * length);
    CompensatedSum<> s;
    for (int n = 1; n < 1000000; ++n) {
        const double decay = std::exp(-rate * n * n);
        // |phi_n| <= norm and |<phi_n, r>| <= norm * mass
        if (decay * norm * norm * mass_bound < 1e-15) break;
        s.add(decay * norm * std::sin(n * std::numbers::pi * x / length) *
              detail::sine_coefficient(n, length, rr));
    }
    return s.value();
}

/// Dirichlet heat semigroup on (0, L) by the method of images (odd 2L-periodic extension).
inline double dirichlet_interval_semigroup_images(double x, double u, const Datum& r, double length) {
    detail::check_interval(length);
    if (!(u > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffusion time u must be > 0");
    if (!(x > 0.0 && x < length)) return 0.0;
    const Datum rr = detail::restrict_to_interval(r, length);
    const int reach = 1 + static_cast<int>(std::ceil(10.0 * std::sqrt(4.0 * u) / (2.0 * length)));
    CompensatedSum<> s;
    for (int k = -reach; k <= reach; ++k) {
        const double shift = 2.0 * k * length;
        s.add(heat_semigroup(x - shift, u, rr));
        s.add(-heat_semigroup(shift - x, u, rr));
    }
    return s.value();
}

/// Dirichlet heat semigroup on (0, L): images for short times, sine modes otherwise.
inline double dirichlet_interval_semigroup(double x, double u, const Datum& r, double length) {
    detail::check_interval(length);
    if (u < 0.05 * length * length) return dirichlet_interval_semigroup_images(x, u, r, length);
    return dirichlet_interval_semigroup_eigen(x, u, r, length);
}

inline double base_semigroup(const Domain& domain, double x, double u, const Datum& r) {
    if (const auto* iv = std::get_if<Interval>(&domain)) {
        return dirichlet_interval_semigroup(x, u, r, iv->length);
    }
    return heat_semigroup(x, u, r);
}

inline ValidationReport validate(const SubordinationSpec& s) {
    if (!(s.gamma > 0.0) || !(s.gamma < 1.0)) return {false, "gamma must lie in (0, 1)"};
    if (s.route == SubordinationRoute::Dual && s.gamma < 0.5) {
        return {false, "dual route needs 1/2 <= gamma < 1"};
    }
    if (s.route == SubordinationRoute::AbsY && s.gamma != 0.5) {
        return {false, "the |Y(t)| route holds only for gamma = 1/2; for 1/2 < gamma < 1 the law of "
                       "|Y(t)| differs from the mixing density"};
    }
    if (const auto* iv = std::get_if<Interval>(&s.domain); iv && !(iv->length > 0.0)) {
        return {false, "interval length must be > 0"};
    }
    if (const auto* t = std::get_if<TabulatedDatum>(&s.r)) {
        if (t->xs.size() < 2 || t->xs.size() != t->values.size()) {
            return {false, "tabulated datum needs matching xs/values with >= 2 nodes"};
        }
    }
    if (const auto* f = std::get_if<FunctionDatum>(&s.r); f && (!f->f || !(f->lo < f->hi))) {
        return {false, "function datum needs a callable and lo < hi"};
    }
    return {};
}

/// Mixing density in u for the chosen route (standard subordinator, b = 1).
inline double mixing_density(const SubordinationSpec& s, double u, double t) {
    if (!(u > 0.0)) return 0.0;
    switch (s.route) {
        case SubordinationRoute::Inverse:
            return h_density(u, InverseDensitySpec{s.gamma, 1.0, t, InverseRoute::SelfSimilar});
        case SubordinationRoute::Dual: {
            const double alpha = 1.0 / s.gamma;
            return density(u, zolotarev(alpha, 2.0 - alpha, t)) / s.gamma;
        }
        case SubordinationRoute::AbsY:
            return 2.0 * detail::heat_kernel(u, t);
    }
    return 0.0;
}

/// Point beyond which the mixing density is below exp(-80) of its scale: the right tail of
/// h(u, t) behaves like exp(-(1 - g) g^{g/(1-g)} (u / t^g)^{1/(1-g)}).
inline double mixing_cutoff(double gamma, double t) {
    const double c = (1.0 - gamma) * std::pow(gamma, gamma / (1.0 - gamma));
    return std::pow(t, gamma) * std::max(4.0, std::pow(80.0 / c, 1.0 - gamma));
}

/// m(x, t) = int_0^inf p(x, u) w(u, t) du, split at u = t^gamma; the lower half is mapped
/// by u = t^gamma exp(-v / (1 - v)), the upper half is integrated in log u up to the
/// tail cutoff.
inline double subordinate(const SubordinationSpec& s, double x, double t) {
    if (auto r = validate(s); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be > 0");
    const double uc = std::pow(t, s.gamma);
    auto weight = [&](double u) {
        const double w = mixing_density(s, u, t);
        return w == 0.0 ? 0.0 : base_semigroup(s.domain, x, u, s.r) * w;
    };
    auto lower = [&](double v) {
        const double one_minus = 1.0 - v;
        if (one_minus <= 0.0) return 0.0;
        const double e = v / one_minus;
        if (e > 700.0) return 0.0;
        const double u = uc * std::exp(-e);
        if (!(u > 0.0)) return 0.0;
        return weight(u) * u / (one_minus * one_minus);
    };
    auto upper = [&](double e) {
        const double u = uc * std::exp(e);
        return weight(u) * u;
    };
    const double top = std::log(mixing_cutoff(s.gamma, t) / uc);
    return integrate(lower, 0.0, 1.0, s.quad) + integrate(upper, 0.0, top, s.quad);
}

}  // namespace fracdual
