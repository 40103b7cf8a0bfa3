#ifndef GERMNORM_LOG_MAGNITUDE_HPP
#define GERMNORM_LOG_MAGNITUDE_HPP

#include <cmath>
#include <compare>
#include <limits>

namespace germnorm {

/// Nonnegative magnitude stored as its natural logarithm; -inf encodes 0.
template <typename Scalar = double>
struct LogMagnitude {
    Scalar log_value = -std::numeric_limits<Scalar>::infinity();

    static constexpr LogMagnitude zero() noexcept { return {}; }
    static constexpr LogMagnitude one() noexcept { return {Scalar(0)}; }
    static LogMagnitude from_magnitude(Scalar m) {
        using std::abs;
        using std::log;
        return {log(abs(m))};
    }

    bool is_zero() const noexcept { return log_value == -std::numeric_limits<Scalar>::infinity(); }
    bool is_finite() const noexcept { return std::isfinite(static_cast<double>(log_value)); }

    /// exp(log_value); may overflow to +inf for very large magnitudes.
    Scalar magnitude() const {
        using std::exp;
        return exp(log_value);
    }

    friend bool operator==(const LogMagnitude&, const LogMagnitude&) = default;
    friend auto operator<=>(const LogMagnitude& a, const LogMagnitude& b) noexcept {
        return a.log_value <=> b.log_value;
    }
};

using LogMagnitudeD = LogMagnitude<double>;

} // namespace germnorm

#endif // GERMNORM_LOG_MAGNITUDE_HPP
