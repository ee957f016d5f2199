#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "fracdual/error.hpp"

namespace fracdual {

// Characteristic function convention: phat(l) = integral of exp(i l x) p(x) dx = exp(psi(l)).
//   LukacsTheta  (theta, c): psi = -c |l|^a [1 + i theta sgn(l) tan(pi a / 2)]
//   ZolotarevEta (eta, b):   psi = -b |l|^a exp(-i pi eta sgn(l) / 2)
//   StBeta       (beta, s):  psi = -s^a |l|^a [1 - i beta sgn(l) tan(pi a / 2)]
//   FellerQ      (q, a):     psi = q a (i l)^a + (1 - q) a (-i l)^a
enum class Parametrization { LukacsTheta, ZolotarevEta, StBeta, FellerQ };

inline const char* to_string(Parametrization tag) noexcept {
    switch (tag) {
        case Parametrization::LukacsTheta: return "theta";
        case Parametrization::ZolotarevEta: return "eta";
        case Parametrization::StBeta: return "beta";
        case Parametrization::FellerQ: return "q";
    }
    return "unknown";
}

inline std::optional<Parametrization> parse_parametrization(std::string_view name) {
    if (name == "theta") return Parametrization::LukacsTheta;
    if (name == "eta") return Parametrization::ZolotarevEta;
    if (name == "beta") return Parametrization::StBeta;
    if (name == "q") return Parametrization::FellerQ;
    return std::nullopt;
}

struct ValidationReport {
    bool ok = true;
    std::string violation;
    explicit operator bool() const { return ok; }
};

struct StableParams {
    Parametrization tag = Parametrization::ZolotarevEta;
    double alpha = 2.0;
    double asym = 0.0;
    double scale = 1.0;

    /// Throws InvalidArgument when the invariants fail.
    static StableParams make(Parametrization tag, double alpha, double asym, double scale);
};

namespace detail {

// Slack for boundary values produced by round-off in conversions.
inline constexpr double kRangeSlack = 1e-12;

inline bool within(double value, double bound) {
    return std::abs(value) <= bound + kRangeSlack * std::max(1.0, std::abs(bound));
}

inline double clamp_abs(double value, double bound) {
    return std::max(-bound, std::min(bound, value));
}

inline double half_pi_tan(double alpha) { return std::tan(std::numbers::pi * alpha / 2.0); }

}  // namespace detail

/// Admissible |eta| for a given alpha: alpha below 1, 2 - alpha above.
inline double eta_bound(double alpha) { return alpha < 1.0 ? alpha : 2.0 - alpha; }

inline ValidationReport validate_alpha(double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > 2.0) {
        return {false, "alpha must lie in (0, 2], got " + std::to_string(alpha)};
    }
    if (alpha == 1.0) return {false, "alpha = 1 is not supported"};
    return {};
}

inline ValidationReport validate(const StableParams& p) {
    if (auto r = validate_alpha(p.alpha); !r) return r;
    if (!std::isfinite(p.asym) || !std::isfinite(p.scale)) {
        return {false, "asymmetry and scale must be finite"};
    }
    switch (p.tag) {
        case Parametrization::LukacsTheta:
            if (!detail::within(p.asym, 1.0)) return {false, "|theta| <= 1 violated"};
            if (!(p.scale > 0.0)) return {false, "scale c must be > 0"};
            break;
        case Parametrization::ZolotarevEta: {
            const double bound = eta_bound(p.alpha);
            if (!detail::within(p.asym, bound)) {
                return {false, std::string(p.alpha < 1.0 ? "|eta| <= alpha" : "|eta| <= 2 - alpha") +
                                   " violated (|eta| = " + std::to_string(std::abs(p.asym)) +
                                   ", bound = " + std::to_string(bound) + ")"};
            }
            if (!(p.scale > 0.0)) return {false, "scale b must be > 0"};
            break;
        }
        case Parametrization::StBeta:
            if (!detail::within(p.asym, 1.0)) return {false, "|beta| <= 1 violated"};
            if (!(p.scale > 0.0)) return {false, "scale sigma must be > 0"};
            break;
        case Parametrization::FellerQ:
            if (p.asym < -detail::kRangeSlack || p.asym > 1.0 + detail::kRangeSlack) {
                return {false, "q in [0, 1] violated"};
            }
            if (p.alpha > 1.0 && !(p.scale > 0.0)) return {false, "scale a must be > 0 for alpha > 1"};
            if (p.alpha < 1.0 && !(p.scale < 0.0)) return {false, "scale a must be < 0 for alpha < 1"};
            break;
    }
    return {};
}

inline StableParams StableParams::make(Parametrization tag, double alpha, double asym, double scale) {
    StableParams p{tag, alpha, asym, scale};
    if (auto r = validate(p); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    return p;
}

inline StableParams zolotarev(double alpha, double eta, double b = 1.0) {
    return StableParams::make(Parametrization::ZolotarevEta, alpha, eta, b);
}

namespace detail {

inline StableParams to_eta(const StableParams& p) {
    const double a = p.alpha;
    double theta = 0.0;
    double c = 0.0;
    switch (p.tag) {
        case Parametrization::ZolotarevEta: return p;
        case Parametrization::LukacsTheta:
            theta = p.asym;
            c = p.scale;
            break;
        case Parametrization::StBeta:
            theta = -p.asym;
            c = std::pow(p.scale, a);
            break;
        case Parametrization::FellerQ:
            theta = -(1.0 - 2.0 * p.asym);
            c = -p.scale * std::cos(std::numbers::pi * a / 2.0);
            break;
    }
    if (a == 2.0) return {Parametrization::ZolotarevEta, a, 0.0, c};
    theta = clamp_abs(theta, 1.0);
    double eta = (2.0 / std::numbers::pi) * std::atan(-theta * half_pi_tan(a));
    eta = clamp_abs(eta, eta_bound(a));
    const double b = c / std::cos(std::numbers::pi * eta / 2.0);
    return {Parametrization::ZolotarevEta, a, eta, b};
}

inline StableParams from_eta(const StableParams& e, Parametrization target) {
    const double a = e.alpha;
    const double c = e.scale * std::cos(std::numbers::pi * e.asym / 2.0);
    const double theta =
        a == 2.0 ? 0.0
                 : clamp_abs(-std::tan(std::numbers::pi * e.asym / 2.0) / half_pi_tan(a), 1.0);
    switch (target) {
        case Parametrization::ZolotarevEta: return e;
        case Parametrization::LukacsTheta: return {target, a, theta, c};
        case Parametrization::StBeta: return {target, a, -theta, std::pow(c, 1.0 / a)};
        case Parametrization::FellerQ: {
            const double beta = -theta;
            return {target, a, (1.0 - beta) / 2.0, -c / std::cos(std::numbers::pi * a / 2.0)};
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown target parametrization");
}

}  // namespace detail

/// Same distribution expressed in another parametrization (routed through eta form).
inline StableParams convert(const StableParams& p, Parametrization target) {
    if (auto r = validate(p); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    switch (target) {
        case Parametrization::LukacsTheta:
        case Parametrization::ZolotarevEta:
        case Parametrization::StBeta:
        case Parametrization::FellerQ: break;
        default: throw Error(ErrorCode::InvalidArgument, "unknown target parametrization");
    }
    if (p.tag == target) return p;
    return detail::from_eta(detail::to_eta(p), target);
}

inline StableParams to_zolotarev(const StableParams& p) {
    return convert(p, Parametrization::ZolotarevEta);
}

struct DualParams {
    double alpha_star;
    double eta_star;
};

/// Zolotarev dual of an index above 1: alpha* = 1/alpha, eta* = (eta - 1)/alpha + 1.
inline DualParams dual_params(double alpha, double eta) {
    if (!(alpha > 1.0) || alpha > 2.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "dual parameters need 1 < alpha <= 2, got " + std::to_string(alpha));
    }
    if (!detail::within(eta, 2.0 - alpha)) {
        throw Error(ErrorCode::InvalidArgument, "|eta| <= 2 - alpha violated");
    }
    return {1.0 / alpha, (eta - 1.0) / alpha + 1.0};
}

/// psi(lambda) evaluated with the formula of the tag carried by p.
inline std::complex<double> characteristic_exponent(const StableParams& p, double lambda) {
    using namespace std::complex_literals;
    if (auto r = validate(p); !r) throw Error(ErrorCode::InvalidArgument, r.violation);
    if (lambda == 0.0) return 0.0;
    const double a = p.alpha;
    const double mag = std::pow(std::abs(lambda), a);
    const double sgn = lambda > 0.0 ? 1.0 : -1.0;
    const double tan_a = a == 2.0 ? 0.0 : detail::half_pi_tan(a);
    switch (p.tag) {
        case Parametrization::LukacsTheta:
            return -p.scale * mag * (1.0 + 1i * p.asym * sgn * tan_a);
        case Parametrization::ZolotarevEta:
            return -p.scale * mag * std::exp(-1i * (std::numbers::pi * p.asym * sgn / 2.0));
        case Parametrization::StBeta:
            return -std::pow(p.scale, a) * mag * (1.0 - 1i * p.asym * sgn * tan_a);
        case Parametrization::FellerQ: {
            const std::complex<double> il(0.0, lambda);
            return p.asym * p.scale * std::pow(il, a) + (1.0 - p.asym) * p.scale * std::pow(-il, a);
        }
    }
    return 0.0;
}

}  // namespace fracdual
