#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "fracdual/error.hpp"
#include "fracdual/mittag_leffler.hpp"
#include "fracdual/numerics.hpp"
#include "fracdual/stable_density.hpp"

namespace fracdual {

enum class InverseRoute { SelfSimilar, Duality };

inline const char* to_string(InverseRoute r) noexcept {
    return r == InverseRoute::SelfSimilar ? "self-similar" : "duality";
}

inline std::optional<InverseRoute> parse_inverse_route(std::string_view name) {
    if (name == "self-similar") return InverseRoute::SelfSimilar;
    if (name == "duality") return InverseRoute::Duality;
    return std::nullopt;
}

/// Inverse stable subordinator E_t of a subordinator D with E exp(-s D(1)) = exp(-b s^gamma).
struct InverseDensitySpec {
    double gamma = 0.5;
    double b = 1.0;
    double t = 1.0;
    InverseRoute route = InverseRoute::SelfSimilar;

    static InverseDensitySpec make(double gamma, double b, double t,
                                   InverseRoute route = InverseRoute::SelfSimilar);
};

inline ValidationReport validate(const InverseDensitySpec& s) {
    if (!(s.gamma > 0.0) || !(s.gamma < 1.0)) return {false, "gamma must lie in (0, 1)"};
    if (!(s.b > 0.0) || !std::isfinite(s.b)) return {false, "b must be > 0"};
    if (!(s.t > 0.0) || !std::isfinite(s.t)) return {false, "t must be > 0"};
    if (s.route == InverseRoute::Duality && s.gamma < 0.5) {
        return {false, "duality route needs 1/2 <= gamma < 1"};
    }
    return {};
}

inline InverseDensitySpec InverseDensitySpec::make(double gamma, double b, double t, InverseRoute route) {
    InverseDensitySpec s{gamma, b, t, route};
    if (auto r = validate(s); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    return s;
}

/// h(0+, t) = t^{-gamma} / (b Gamma(1 - gamma)).
inline double h_origin_limit(const InverseDensitySpec& s) {
    return std::pow(s.t, -s.gamma) / (s.b * std::tgamma(1.0 - s.gamma));
}

/// Density h(x, t) of E_t at x > 0.
inline double h_density(double x, const InverseDensitySpec& s,
                        DensityMethod method = DensityMethod::Auto, const DensityOptions& opts = {}) {
    if (auto r = validate(s); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::Domain, "h needs x > 0");
    const double g = s.gamma;
    if (s.route == InverseRoute::SelfSimilar) {
        // P(E_t <= x) = P(D(1) >= t x^{-1/gamma})
        const double y = s.t * std::pow(x, -1.0 / g);
        if (!std::isfinite(y)) return h_origin_limit(s);
        const double dens = density(y, zolotarev(g, g, s.b), method, opts);
        return y * dens / (g * x);
    }
    const double alpha = 1.0 / g;
    const double scale = process_scale(alpha, s.b, s.t);
    if (g == 0.5) {
        return 2.0 * std::exp(-x * x / (4.0 * scale)) / std::sqrt(4.0 * std::numbers::pi * scale);
    }
    return alpha * density(x, zolotarev(alpha, 2.0 - alpha, scale), method, opts);
}

struct LaplaceCheck {
    double lhs;  // quadrature of int_0^inf exp(-z x) h(x, t) dx
    double rhs;  // E_gamma(-z t^gamma / b)
};

inline LaplaceCheck laplace_check(const InverseDensitySpec& s, double z,
                                  const QuadratureOptions& quad = {1e-11, 1e-10, 4000}) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw Error(ErrorCode::InvalidArgument, "z must be >= 0");
    auto f = [&](double x) { return x > 0.0 ? std::exp(-z * x) * h_density(x, s) : 0.0; };
    const double lhs = integrate_half_line(f, 0.0, quad);
    const double rhs = mittag_leffler(s.gamma, -z * std::pow(s.t, s.gamma) / s.b);
    return {lhs, rhs};
}

/// Point past which h(., t) is below exp(-80) of its scale; E_t is t^gamma / b times E_1
/// and the right tail of E_1 behaves like exp(-(1 - g) g^{g/(1-g)} x^{1/(1-g)}).
inline double h_tail_cutoff(const InverseDensitySpec& s) {
    const double g = s.gamma;
    const double c = (1.0 - g) * std::pow(g, g / (1.0 - g));
    return std::pow(s.t, g) / s.b * std::pow(80.0 / c, 1.0 - g);
}

/// Tabulated CDF of E_t on [0, h_tail_cutoff].
inline TabulatedCdf h_cdf(const InverseDensitySpec& s, std::size_t cells = 2000) {
    if (auto r = validate(s); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    InverseDensitySpec fast = s;
    if (s.gamma >= 0.5) fast.route = InverseRoute::Duality;
    const double origin = h_origin_limit(s);
    return TabulatedCdf::build([&](double x) { return x > 0.0 ? h_density(x, fast) : origin; }, 0.0,
                               h_tail_cutoff(s), cells);
}

/// E[E_t] = t^gamma / (b Gamma(1 + gamma)).
inline double inverse_mean(const InverseDensitySpec& s) {
    return std::pow(s.t, s.gamma) / (s.b * std::tgamma(1.0 + s.gamma));
}

}  // namespace fracdual
