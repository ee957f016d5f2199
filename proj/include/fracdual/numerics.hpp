#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracdual/error.hpp"

namespace fracdual {

/// Neumaier (improved Kahan) compensated summation.
template <class Real = double>
class CompensatedSum {
public:
    void add(const Real& term) {
        Real t = sum_ + term;
        if (abs_(sum_) >= abs_(term)) {
            comp_ += (sum_ - t) + term;
        } else {
            comp_ += (term - t) + sum_;
        }
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    static Real abs_(const Real& v) { return v < 0 ? Real(-v) : v; }
    Real sum_{0};
    Real comp_{0};
};

/// Relative comparison with an absolute floor; the default floor only guards exact zeros.
inline bool approx_equal(double a, double b, double rel = 1e-12, double abs_floor = 1e-300) {
    const double diff = std::abs(a - b);
    return diff <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

inline double relative_error(double value, double reference) {
    if (reference == 0.0) return std::abs(value);
    return std::abs(value - reference) / std::abs(reference);
}

inline std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct QuadratureOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    std::size_t max_intervals = 4000;
};

struct RuleResult {
    double value;
    double error;
    double l1;
};

/// 31-point Kronrod rule with the embedded 15-point Gauss rule on [lo, hi], error
/// estimated the QUADPACK way.
template <class F>
RuleResult kronrod31(F& f, double lo, double hi) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    using G = boost::math::quadrature::gauss<double, 15>;
    static const auto& nodes = GK::abscissa();
    static const auto& kw = GK::weights();
    static const auto& gw = G::weights();
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, 31> fv{};
    fv[0] = static_cast<double>(f(center));
    double kronrod = fv[0] * kw[0];
    double gauss = fv[0] * gw[0];
    double l1 = std::abs(fv[0]) * kw[0];
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double fp = static_cast<double>(f(center + half * nodes[i]));
        const double fm = static_cast<double>(f(center - half * nodes[i]));
        fv[2 * i - 1] = fp;
        fv[2 * i] = fm;
        kronrod += (fp + fm) * kw[i];
        l1 += (std::abs(fp) + std::abs(fm)) * kw[i];
        if ((i & 1) == 0) gauss += (fp + fm) * gw[i / 2];
    }
    const double mean = 0.5 * kronrod;
    double asc = std::abs(fv[0] - mean) * kw[0];
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        asc += (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean)) * kw[i];
    }
    asc *= half;
    l1 *= half;
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (l1 > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * l1, err);
    return {kronrod * half, err, l1};
}

/// Globally adaptive Gauss-Kronrod (15/31) over consecutive panels given by breakpoints.
/// The panel with the largest error estimate is bisected until the summed estimate meets
/// the tolerance.
template <class F>
double integrate_panels(F&& f, std::span<const double> breaks, const QuadratureOptions& opt = {}) {
    if (breaks.size() < 2) return 0.0;

    struct Segment {
        double lo, hi, value, error, l1;
        bool operator<(const Segment& other) const { return error < other.error; }
    };
    auto eval = [&f](double lo, double hi) {
        const RuleResult r = kronrod31(f, lo, hi);
        return Segment{lo, hi, r.value, r.error, r.l1};
    };

    std::priority_queue<Segment> heap;
    CompensatedSum<> initial;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1])) {
            throw Error(ErrorCode::InvalidArgument, "quadrature breakpoints must increase");
        }
        Segment s = eval(breaks[i], breaks[i + 1]);
        initial.add(s.value);
        total_err += s.error;
        heap.push(s);
    }
    double total = initial.value();
    const std::size_t budget = opt.max_intervals + breaks.size();
    // Round-off floor, above the per-panel floor of kronrod31.
    double magnitude = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            magnitude += copy.top().l1;
            copy.pop();
        }
    }
    auto target = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * std::abs(total),
                         100.0 * std::numeric_limits<double>::epsilon() * magnitude});
    };
    while (total_err > target()) {
        if (!std::isfinite(total) || !std::isfinite(total_err)) {
            throw Error(ErrorCode::QuadratureFail,
                        "non-finite integrand on [" + std::to_string(breaks.front()) + ", " +
                            std::to_string(breaks.back()) + "]");
        }
        if (heap.size() >= budget) {
            throw Error(ErrorCode::QuadratureFail,
                        "adaptive refinement budget exhausted (error estimate " +
                            fmt_sci(total_err) + ", target " + fmt_sci(target()) + ")");
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) {
            // Interval exhausted to machine resolution; keep its estimate.
            total_err -= worst.error;
            worst.error = 0.0;
            heap.push(worst);
            continue;
        }
        Segment left = eval(worst.lo, mid);
        Segment right = eval(mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        magnitude += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    if (!std::isfinite(total)) {
        throw Error(ErrorCode::QuadratureFail, "non-finite integral");
    }
    // Re-add from the leaves to shed the drift of the running total.
    CompensatedSum<> final_sum;
    while (!heap.empty()) {
        final_sum.add(heap.top().value);
        heap.pop();
    }
    return final_sum.value();
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (a == b) return 0.0;
    if (!(a < b)) return -integrate(f, b, a, opt);
    const double breaks[2] = {a, b};
    return integrate_panels(f, std::span<const double>(breaks, 2), opt);
}

/// Integral over [a, inf) through x = a + u / (1 - u).
template <class F>
double integrate_half_line(F&& f, double a, const QuadratureOptions& opt = {}) {
    auto mapped = [&f, a](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        const double x = a + u / one_minus;
        if (!std::isfinite(x)) return 0.0;
        return static_cast<double>(f(x)) / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

/// Cumulative distribution tabulated from a density on a uniform grid, linearly
/// interpolated between nodes. Values below lo are 0; above hi the last value is held.
class TabulatedCdf {
public:
    TabulatedCdf() = default;

    template <class Density>
    static TabulatedCdf build(Density&& density, double lo, double hi, std::size_t cells) {
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        TabulatedCdf cdf;
        cdf.lo_ = lo;
        cdf.step_ = (hi - lo) / static_cast<double>(cells);
        cdf.values_.assign(cells + 1, 0.0);
        CompensatedSum<> acc;
        for (std::size_t i = 0; i < cells; ++i) {
            const double a = lo + cdf.step_ * static_cast<double>(i);
            const double b = a + cdf.step_;
            acc.add(GK::integrate([&density](double x) { return static_cast<double>(density(x)); },
                                  a, b, 0, 0.0));
            cdf.values_[i + 1] = acc.value();
        }
        return cdf;
    }

    double operator()(double x) const {
        if (values_.empty() || x <= lo_) return 0.0;
        const double pos = (x - lo_) / step_;
        const auto cells = values_.size() - 1;
        if (pos >= static_cast<double>(cells)) return values_.back();
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return values_[i] + frac * (values_[i + 1] - values_[i]);
    }

    double total() const { return values_.empty() ? 0.0 : values_.back(); }
    double lo() const { return lo_; }
    double hi() const { return lo_ + step_ * static_cast<double>(values_.size() - 1); }

private:
    double lo_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> xs(points);
    if (points == 1) {
        xs[0] = lo;
        return xs;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) xs[i] = lo + step * static_cast<double>(i);
    xs.back() = hi;
    return xs;
}

}  // namespace fracdual
