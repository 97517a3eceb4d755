#pragma once

// Welch's unequal-variance t-test for the acceptance checks.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>

namespace faigp::stats {

// Continued fraction for the regularized incomplete beta function (modified
// Lentz). Converges quickly for x < (a + 1) / (a + b + 2).
inline auto BetaContinuedFraction(double a, double b, double x) -> double
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    auto clamp = [](double v) { return std::fabs(v) < tiny ? tiny : v; };
    double c = 1.0;
    double d = 1.0 / clamp(1.0 - (a + b) * x / (a + 1.0));
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        auto const m2 = 2.0 * m;
        auto num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 / clamp(1.0 + num * d);
        c = clamp(1.0 + num / c);
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 / clamp(1.0 + num * d);
        c = clamp(1.0 + num / c);
        auto const delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) {
            break;
        }
    }
    return h;
}

inline auto RegularizedIncompleteBeta(double a, double b, double x) -> double
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    auto const logFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    auto const front = std::exp(logFront);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * BetaContinuedFraction(a, b, x) / a;
    }
    return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

// P(T > t) for Student's t with `df` (possibly fractional) degrees of freedom.
inline auto StudentTSurvival(double t, double df) -> double
{
    auto const tail = 0.5 * RegularizedIncompleteBeta(0.5 * df, 0.5, df / (df + t * t));
    return t >= 0.0 ? tail : 1.0 - tail;
}

struct WelchResult {
    double T { 0.0 };
    double Df { 0.0 };
    double P { 1.0 }; // one-sided, alternative mean(a) > mean(b)
};

inline auto WelchGreater(std::span<double const> a, std::span<double const> b) -> WelchResult
{
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("Welch test needs at least two samples per group");
    }
    auto moments = [](std::span<double const> v) {
        auto const n = static_cast<double>(v.size());
        auto const mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double ss = 0.0;
        for (auto x : v) {
            ss += (x - mean) * (x - mean);
        }
        return std::pair { mean, ss / (n - 1.0) / n };
    };
    auto const [ma, va] = moments(a);
    auto const [mb, vb] = moments(b);
    auto const se2 = va + vb;
    WelchResult r;
    if (se2 == 0.0) {
        r.T = ma > mb ? std::numeric_limits<double>::infinity() : 0.0;
        r.Df = static_cast<double>(a.size() + b.size() - 2);
        r.P = ma > mb ? 0.0 : 1.0;
        return r;
    }
    r.T = (ma - mb) / std::sqrt(se2);
    auto const na = static_cast<double>(a.size());
    auto const nb = static_cast<double>(b.size());
    r.Df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.P = StudentTSurvival(r.T, r.Df);
    return r;
}

} // namespace faigp::stats
