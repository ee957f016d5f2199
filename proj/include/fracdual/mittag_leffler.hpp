#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracdual/error.hpp"
#include "fracdual/numerics.hpp"

namespace fracdual {

struct MittagLefflerOptions {
    std::size_t series_cap = 2000;
    double tol = 1e-16;
    QuadratureOptions quad{1e-15, 1e-13, 4000};
};

namespace detail {

template <class Real>
std::optional<double> ml_series(double beta, double z, const MittagLefflerOptions& opts,
                                double cancellation_limit) {
    using std::abs;
    using std::exp;
    using std::log;
    const Real b = Real(beta);
    const Real lz = log(Real(std::abs(z)));
    const bool negative = z < 0.0;
    CompensatedSum<Real> acc;
    acc.add(Real(1));
    double log_peak = 0.0;
    Real prev = Real(1);
    for (std::size_t k = 1; k <= opts.series_cap; ++k) {
        const Real kr = Real(static_cast<double>(k));
        Real log_mag;
        if constexpr (std::is_same_v<Real, double>) {
            log_mag = kr * lz - std::lgamma(1.0 + beta * static_cast<double>(k));
        } else {
            log_mag = kr * lz - boost::math::lgamma(Real(1) + b * kr);
        }
        const Real mag = exp(log_mag);
        log_peak = std::max(log_peak, static_cast<double>(log_mag));
        acc.add(negative && (k % 2 == 1) ? Real(-mag) : mag);
        if (mag < prev) {
            const Real rho = mag / prev;
            const Real current = abs(acc.value());
            if (mag == Real(0) || mag * rho / (Real(1) - rho) <= Real(opts.tol) * current) {
                const double sum = static_cast<double>(acc.value());
                if (!(sum != 0.0) || std::exp(log_peak) / std::abs(sum) > cancellation_limit) {
                    return std::nullopt;
                }
                return sum;
            }
        }
        prev = mag;
    }
    return std::nullopt;
}

// E_beta(-r) = sin(beta pi) / (pi beta) * int_0^inf exp(-(r w)^{1/beta}) / (w^2 + 2 w cos(beta pi) + 1) dw
inline double ml_negative_integral(double beta, double r, const MittagLefflerOptions& opts) {
    const double c = std::cos(beta * std::numbers::pi);
    const double s = std::sin(beta * std::numbers::pi);
    auto f = [=](double w) {
        return std::exp(-std::pow(r * w, 1.0 / beta)) / (w * w + 2.0 * w * c + 1.0);
    };
    return s / (std::numbers::pi * beta) * integrate_half_line(f, 0.0, opts.quad);
}

}  // namespace detail

/// Mittag-Leffler function E_beta(z) = sum z^k / Gamma(1 + beta k) for real z <= 5.
inline double mittag_leffler(double beta, double z, const MittagLefflerOptions& opts = {}) {
    if (!(beta > 0.0) || beta > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "Mittag-Leffler order must lie in (0, 1]");
    }
    if (!std::isfinite(z)) throw Error(ErrorCode::Domain, "argument must be finite");
    if (z == 0.0) return 1.0;
    if (beta == 1.0) return std::exp(z);
    if (z > 5.0) {
        throw Error(ErrorCode::NonConverged, "E_beta(z) supported for z <= 5 only");
    }
    if (z >= -5.0) {
        if (auto v = detail::ml_series<double>(beta, z, opts, 4.5e3)) return *v;
        if (auto v = detail::ml_series<boost::multiprecision::cpp_bin_float_50>(beta, z, opts, 1e38)) {
            return *v;
        }
        if (z > 0.0) throw Error(ErrorCode::NonConverged, "Mittag-Leffler series did not converge");
    }
    return detail::ml_negative_integral(beta, -z, opts);
}

}  // namespace fracdual
