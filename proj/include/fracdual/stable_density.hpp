#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracdual/error.hpp"
#include "fracdual/numerics.hpp"
#include "fracdual/stable_params.hpp"

namespace fracdual {

enum class DensityMethod { Series, Quadrature, Dual, Auto };

inline const char* to_string(DensityMethod m) noexcept {
    switch (m) {
        case DensityMethod::Series: return "series";
        case DensityMethod::Quadrature: return "quad";
        case DensityMethod::Dual: return "dual";
        case DensityMethod::Auto: return "auto";
    }
    return "unknown";
}

inline std::optional<DensityMethod> parse_density_method(std::string_view name) {
    if (name == "series") return DensityMethod::Series;
    if (name == "quad" || name == "quadrature") return DensityMethod::Quadrature;
    if (name == "dual") return DensityMethod::Dual;
    if (name == "auto") return DensityMethod::Auto;
    return std::nullopt;
}

struct DensityOptions {
    std::size_t series_cap = 4000;
    double tol = 1e-14;
    // Highest working precision the series may escalate to:
    // 0 = double, 1 = 50 digits, 2 = 100 digits.
    int max_precision = 2;
    QuadratureOptions quad{1e-15, 1e-13, 20000};
};

/// Per-evaluation report of the series routes.
struct SeriesInfo {
    std::size_t terms = 0;
    int digits = 0;             // decimal digits of the working type that produced the value
    double cancellation = 0.0;  // largest term magnitude over |sum|
    bool clamped = false;       // negative round-off was clamped to 0
};

using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;

namespace detail {

// Cancellation a working type can absorb while keeping ~1e-12 relative accuracy.
inline constexpr std::array<double, 3> kCancellationLimit = {4.5e3, 1e38, 1e88};
inline constexpr std::array<int, 3> kDigits = {16, 50, 100};
// Snap window for the totally skewed boundary, where the density is singularly
// sensitive to the asymmetry parameter.
inline constexpr double kSkewSnap = 1e-13;

template <class Real>
Real lgamma_r(const Real& v) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::lgamma(v);
    } else {
        return boost::math::lgamma(v);
    }
}

template <class Real>
struct SeriesSum {
    Real sum{0};
    std::size_t terms = 0;
    bool converged = false;
};

// sum_{k>=1} (-1)^{k+1} Gamma(1 + k r) / k! * exp(k L) * sin(pi k angle)
// The envelope exp(lgamma(1 + k r) - lgamma(k + 1) + k L) is log-concave in k for r < 1.
template <class Real>
SeriesSum<Real> alternating_gamma_series(const Real& r, const Real& L, const Real& angle,
                                         std::size_t cap, double tol) {
    using std::exp;
    using std::floor;
    using std::sin;
    using std::abs;
    const Real pi = boost::math::constants::pi<Real>();
    SeriesSum<Real> out;
    CompensatedSum<Real> acc;
    Real prev_env = 0;
    for (std::size_t k = 1; k <= cap; ++k) {
        const Real kr = Real(static_cast<double>(k));
        const Real log_env = lgamma_r<Real>(Real(1) + kr * r) - lgamma_r<Real>(kr + Real(1)) + kr * L;
        const Real env = exp(log_env);
        Real phase = kr * angle;
        phase -= Real(2) * floor(phase / Real(2));
        Real term = env * sin(pi * phase);
        if (k % 2 == 0) term = -term;
        acc.add(term);
        out.terms = k;
        const Real current = acc.value();
        if (k > 1 && env < prev_env) {
            // Past the peak the envelope ratios shrink, so the tail is bounded by a
            // geometric series with the current ratio.
            const Real rho = env / prev_env;
            if (env == Real(0) || env * rho / (Real(1) - rho) <= Real(tol) * abs(current)) {
                out.converged = true;
                break;
            }
        }
        prev_env = env;
    }
    out.sum = acc.value();
    return out;
}

struct EnvelopePeak {
    double log_max = -std::numeric_limits<double>::infinity();
    std::size_t k_peak = 0;
};

inline EnvelopePeak envelope_peak(double r, double L, std::size_t cap) {
    EnvelopePeak peak;
    for (std::size_t k = 1; k <= cap; ++k) {
        const double kd = static_cast<double>(k);
        const double v = std::lgamma(1.0 + kd * r) - std::lgamma(kd + 1.0) + kd * L;
        if (v > peak.log_max) {
            peak.log_max = v;
            peak.k_peak = k;
        } else {
            break;
        }
    }
    return peak;
}

// Description of one series evaluation that can be replayed at any precision.
// value = prefactor(Real) * series(Real) / pi
struct SeriesPlan {
    double r_hint;  // for the envelope scan
    double L_hint;
    std::size_t cap;
    double tol;
};

template <class Real, class Build>
std::optional<double> run_at(const Build& build, const SeriesPlan& plan, double limit,
                             SeriesInfo& info, bool& cap_hit) {
    using std::abs;
    auto [r, L, angle, prefactor] = build.template make<Real>();
    auto s = alternating_gamma_series<Real>(r, L, angle, plan.cap, plan.tol);
    info.terms = s.terms;
    if (!s.converged) {
        cap_hit = true;
        return std::nullopt;
    }
    const double sum_mag = static_cast<double>(abs(s.sum));
    const double peak = envelope_peak(plan.r_hint, plan.L_hint, plan.cap).log_max;
    const double ratio = sum_mag > 0.0 ? std::exp(peak - std::log(sum_mag))
                                       : std::numeric_limits<double>::infinity();
    info.cancellation = ratio;
    if (!(ratio <= limit)) return std::nullopt;
    const Real pi = boost::math::constants::pi<Real>();
    return static_cast<double>(prefactor * s.sum / pi);
}

template <class Build>
double evaluate_with_escalation(const Build& build, const SeriesPlan& plan, int max_precision,
                                SeriesInfo* info_out) {
    SeriesInfo info;
    const EnvelopePeak peak = envelope_peak(plan.r_hint, plan.L_hint, plan.cap);
    if (peak.k_peak >= plan.cap) {
        throw Error(ErrorCode::NonConverged,
                    "series terms still growing at the term cap (" + std::to_string(plan.cap) + ")");
    }
    const double log_peak = peak.log_max;
    std::optional<double> value;
    bool cap_hit = false;
    int level = 0;
    const int top = std::clamp(max_precision, 0, 2);
    // Skip working types that cannot absorb the cancellation even for an O(1) sum.
    while (level < top && log_peak > std::log(kCancellationLimit[level])) ++level;
    for (; level <= top && !value; ++level) {
        switch (level) {
            case 0: value = run_at<double>(build, plan, kCancellationLimit[0], info, cap_hit); break;
            case 1: value = run_at<Float50>(build, plan, kCancellationLimit[1], info, cap_hit); break;
            default: value = run_at<Float100>(build, plan, kCancellationLimit[2], info, cap_hit); break;
        }
        info.digits = kDigits[level];
        if (cap_hit) {
            throw Error(ErrorCode::NonConverged,
                        "series cap of " + std::to_string(plan.cap) + " terms reached");
        }
    }
    if (!value) {
        throw Error(ErrorCode::NonConverged,
                    "cancellation ratio " + std::to_string(info.cancellation) +
                        " exceeds the available working precision");
    }
    double v = *value;
    if (v < 0.0) {
        info.clamped = true;
        v = 0.0;
    }
    if (info_out) *info_out = info;
    return v;
}

// Series for 1 < alpha <= 2 at |x| > 0, asymmetry already reflected for x < 0.
struct SuperBuild {
    double x;  // > 0
    double alpha;
    double eta;
    template <class Real>
    std::array<Real, 4> make() const {
        using std::log;
        const Real a = Real(alpha);
        Real angle;
        if (std::abs(eta - (2.0 - alpha)) <= kSkewSnap) {
            angle = Real(1) / a;
        } else if (std::abs(eta + (2.0 - alpha)) <= kSkewSnap) {
            angle = Real(1) - Real(1) / a;
        } else {
            angle = (Real(eta) + a) / (Real(2) * a);
        }
        const Real lx = log(Real(x));
        return {Real(1) / a, lx, angle, Real(1) / Real(x)};
    }
};

// Series for 0 < alpha < 1 at y > 0.
struct SubBuild {
    double y;
    double alpha;
    double eta;
    template <class Real>
    std::array<Real, 4> make() const {
        using std::log;
        const Real a = Real(alpha);
        const Real angle = std::abs(eta - alpha) <= kSkewSnap ? a : (a + Real(eta)) / Real(2);
        const Real ly = log(Real(y));
        return {a, -a * ly, angle, Real(1) / Real(y)};
    }
};

// Right side of the duality identity, every step carried out in the working type:
// u^{-(1+alpha)} p_{alpha*}(u^{-alpha}; eta*, 1).
struct DualBuild {
    double u;
    double alpha;
    double eta;
    template <class Real>
    std::array<Real, 4> make() const {
        using std::log;
        using std::pow;
        const Real a = Real(alpha);
        const Real a_star = Real(1) / a;
        Real eta_star = (Real(eta) - Real(1)) / a + Real(1);
        if (std::abs(eta - (2.0 - alpha)) <= kSkewSnap) eta_star = a_star;
        const Real uu = Real(u);
        const Real y = pow(uu, -a);
        const Real ly = log(y);
        const Real angle = (a_star + eta_star) / Real(2);
        // u^{-(1+alpha)} * y^{-1}
        const Real prefactor = pow(uu, -(Real(1) + a)) / y;
        return {a_star, -a_star * ly, angle, prefactor};
    }
};

inline void check_options(const DensityOptions& opts) {
    if (opts.series_cap < 1) throw Error(ErrorCode::InvalidArgument, "series_cap must be >= 1");
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
}

}  // namespace detail

/// Unit-scale stable density in eta form by its convergent power series.
/// 1 < alpha <= 2: any real x. 0 < alpha < 1: x > 0, or x <= 0 where the law vanishes.
inline double density_series(double x, double alpha, double eta, const DensityOptions& opts = {},
                             SeriesInfo* info = nullptr) {
    detail::check_options(opts);
    if (auto r = validate(StableParams{Parametrization::ZolotarevEta, alpha, eta, 1.0}); !r) {
        throw Error(ErrorCode::Domain, r.violation);
    }
    if (!std::isfinite(x)) throw Error(ErrorCode::Domain, "x must be finite");
    if (alpha > 1.0) {
        if (x < 0.0) {
            x = -x;
            eta = -eta;
        }
        if (x == 0.0) {
            // Only the k = 1 term survives.
            const double angle = std::abs(eta - (2.0 - alpha)) <= detail::kSkewSnap
                                     ? 1.0 / alpha
                                     : (eta + alpha) / (2.0 * alpha);
            if (info) *info = SeriesInfo{1, 16, 1.0, false};
            return std::tgamma(1.0 + 1.0 / alpha) * std::sin(std::numbers::pi * angle) /
                   std::numbers::pi;
        }
        const detail::SeriesPlan plan{1.0 / alpha, std::log(x), opts.series_cap, opts.tol};
        return detail::evaluate_with_escalation(detail::SuperBuild{x, alpha, eta}, plan,
                                                opts.max_precision, info);
    }
    if (x < 0.0) {
        x = -x;
        eta = -eta;
    }
    const bool total_positive = std::abs(eta - alpha) <= detail::kSkewSnap;
    const bool total_negative = std::abs(eta + alpha) <= detail::kSkewSnap;
    if (total_negative) {
        if (info) *info = SeriesInfo{};
        return 0.0;
    }
    if (x == 0.0) {
        if (total_positive) {
            if (info) *info = SeriesInfo{};
            return 0.0;
        }
        throw Error(ErrorCode::Domain, "series for alpha < 1 diverges at x = 0 unless |eta| = alpha");
    }
    const detail::SeriesPlan plan{alpha, -alpha * std::log(x), opts.series_cap, opts.tol};
    return detail::evaluate_with_escalation(detail::SubBuild{x, alpha, eta}, plan,
                                            opts.max_precision, info);
}

/// Right side of p_a(u; eta, 1) = u^{-(1+a)} p_{1/a}(u^{-a}; eta*, 1), evaluated by the
/// dual series.
inline double density_dual(double u, double alpha, double eta, const DensityOptions& opts = {},
                           SeriesInfo* info = nullptr) {
    detail::check_options(opts);
    if (!(u > 0.0) || !std::isfinite(u)) throw Error(ErrorCode::Domain, "dual route needs u > 0");
    if (!(alpha > 1.0) || alpha > 2.0) {
        throw Error(ErrorCode::Domain, "dual route needs 1 < alpha <= 2");
    }
    if (!detail::within(eta, 2.0 - alpha)) throw Error(ErrorCode::Domain, "|eta| <= 2 - alpha violated");
    const auto dual = dual_params(alpha, eta);
    if (std::abs(dual.eta_star + dual.alpha_star) <= detail::kSkewSnap) {
        if (info) *info = SeriesInfo{};
        return 0.0;
    }
    // Envelope of the dual series, in double, for precision selection.
    const double ly = -alpha * std::log(u);
    const detail::SeriesPlan plan{dual.alpha_star, -dual.alpha_star * ly, opts.series_cap, opts.tol};
    return detail::evaluate_with_escalation(detail::DualBuild{u, alpha, eta}, plan,
                                            opts.max_precision, info);
}

/// Fourier inversion p(x) = (1/pi) int_0^inf Re exp(-i l x + psi(l)) dl for any valid params.
inline double density_quadrature(double x, const StableParams& params,
                                 const DensityOptions& opts = {}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::Domain, "x must be finite");
    const StableParams e = to_zolotarev(params);
    const double alpha = e.alpha;
    const double b = e.scale;
    const double half = std::numbers::pi * e.asym / 2.0;
    const double damp = b * std::cos(half);
    const double swirl = b * std::sin(half);
    if (!(damp > 0.0)) throw Error(ErrorCode::Domain, "non-integrable characteristic function");
    // exp(-damp * L^alpha) = 1e-16
    const double lambda_max = std::pow(36.8413614879047 / damp, 1.0 / alpha);
    auto integrand = [=](double l) {
        const double la = std::pow(l, alpha);
        return std::exp(-damp * la) * std::cos(-l * x + swirl * la);
    };
    const double phase = std::abs(x) * lambda_max + std::abs(swirl) * std::pow(lambda_max, alpha);
    const auto panels = static_cast<std::size_t>(
        std::clamp(std::ceil(phase / std::numbers::pi), 8.0, 20000.0));
    const auto breaks = linspace(0.0, lambda_max, panels + 1);
    QuadratureOptions q = opts.quad;
    q.max_intervals = std::max<std::size_t>(q.max_intervals, 4 * panels);
    const double v = integrate_panels(integrand, breaks, q) / std::numbers::pi;
    return v < 0.0 ? 0.0 : v;
}

struct ScaleMap {
    double x_unit;  // point at which to evaluate the unit-scale density
    double factor;  // multiplier applied to the unit-scale value
};

/// p(x; eta, b) = b^{-1/alpha} p(b^{-1/alpha} x; eta, 1).
inline ScaleMap scale_map(double x, double b, double alpha) {
    if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidArgument, "scale b must be > 0");
    const double f = std::pow(b, -1.0 / alpha);
    return {f * x, f};
}

inline std::pair<double, double> rescale(double value_at_unit_scale, double x, double b, double alpha) {
    const ScaleMap m = scale_map(x, b, alpha);
    return {m.x_unit, m.factor * value_at_unit_scale};
}

/// Scale of Y(t) in eta form when Y has unit-time scale b^{-alpha}.
inline double process_scale(double alpha, double b, double t) { return std::pow(b, -alpha) * t; }

/// Density at x of the law described by params, by the requested route.
/// Auto tries the double-precision series and falls back to quadrature.
inline double density(double x, const StableParams& params, DensityMethod method = DensityMethod::Auto,
                      const DensityOptions& opts = {}) {
    const StableParams e = to_zolotarev(params);
    const ScaleMap m = scale_map(x, e.scale, e.alpha);
    switch (method) {
        case DensityMethod::Series:
            return m.factor * density_series(m.x_unit, e.alpha, e.asym, opts);
        case DensityMethod::Quadrature:
            return density_quadrature(x, e, opts);
        case DensityMethod::Dual:
            if (!(x > 0.0)) throw Error(ErrorCode::Domain, "dual route needs x > 0");
            return m.factor * density_dual(m.x_unit, e.alpha, e.asym, opts);
        case DensityMethod::Auto: {
            DensityOptions fast = opts;
            fast.max_precision = 0;
            try {
                return m.factor * density_series(m.x_unit, e.alpha, e.asym, fast);
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NonConverged && err.code() != ErrorCode::Domain) throw;
            }
            return density_quadrature(x, e, opts);
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown density method");
}

}  // namespace fracdual
