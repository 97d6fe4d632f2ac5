#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace nkgeo {

struct Rational {
    long long num = 0;
    long long den = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(num) / static_cast<double>(den);
    }
};

/// Continued-fraction convergent p/q of x with q <= max_den and
/// |x - p/q| <= rel_tol * max(1, |x|). Convergents are produced in lowest
/// terms; returns nullopt when the denominator cap is hit before the
/// tolerance is reached.
inline std::optional<Rational> rational_approx(double x, long long max_den, double rel_tol = 1e-9) {
    if (max_den < 1 || !std::isfinite(x)) return std::nullopt;
    const double tol = rel_tol * std::max(1.0, std::abs(x));
    const bool neg = x < 0.0;
    long double y = std::abs(static_cast<long double>(x));
    long long prev_num = 0, prev_den = 1;
    long long num = 1, den = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const long double fterm = std::floor(y);
        if (fterm > 9.0e18L) return std::nullopt;  // would not fit a long long term
        const long long term = static_cast<long long>(fterm);
        const __int128 nn = static_cast<__int128>(term) * num + prev_num;
        const __int128 nd = static_cast<__int128>(term) * den + prev_den;
        if (nd > max_den) return std::nullopt;
        prev_num = num;
        prev_den = den;
        num = static_cast<long long>(nn);
        den = static_cast<long long>(nd);
        if (std::abs(std::abs(x) - static_cast<double>(num) / static_cast<double>(den)) <= tol)
            return Rational{neg ? -num : num, den};
        const long double frac = y - fterm;
        if (frac <= 0.0L) break;  // x is exactly rational but outside tolerance semantics
        y = 1.0L / frac;
    }
    return std::nullopt;
}

}  // namespace nkgeo
