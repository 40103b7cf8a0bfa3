#ifndef GERMNORM_NORMS_HPP
#define GERMNORM_NORMS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "germnorm/errors.hpp"
#include "germnorm/germspace.hpp"
#include "germnorm/log_magnitude.hpp"

namespace germnorm {

/// Positive weights delta_0 ... delta_M with their logarithms.
///
/// The log values are kept alongside the plain values so that weights built
/// from logarithmic formulas are used without a round trip through exp/log.
template <typename Scalar = double>
class WeightSequence {
public:
    WeightSequence() = default;

    static WeightSequence from_values(std::vector<Scalar> values) {
        WeightSequence w;
        w.log_values_.reserve(values.size());
        for (std::size_t n = 0; n < values.size(); ++n) {
            if (!(values[n] > Scalar(0)) || !std::isfinite(static_cast<double>(values[n]))) {
                throw InputError("WeightSequence: weight " + std::to_string(n) + " is not a positive finite number");
            }
            using std::log;
            w.log_values_.push_back(log(values[n]));
        }
        w.values_ = std::move(values);
        return w;
    }

    static WeightSequence from_log_values(std::vector<Scalar> logs) {
        WeightSequence w;
        w.values_.reserve(logs.size());
        for (std::size_t n = 0; n < logs.size(); ++n) {
            if (!std::isfinite(static_cast<double>(logs[n]))) {
                throw InputError("WeightSequence: log weight " + std::to_string(n) + " is not finite");
            }
            using std::exp;
            w.values_.push_back(exp(logs[n]));
        }
        w.log_values_ = std::move(logs);
        return w;
    }

    std::size_t size() const noexcept { return values_.size(); }
    Scalar value(std::size_t n) const { return values_.at(n); }
    Scalar log_value(std::size_t n) const { return log_values_.at(n); }
    std::span<const Scalar> values() const noexcept { return values_; }
    std::span<const Scalar> log_values() const noexcept { return log_values_; }

private:
    std::vector<Scalar> values_;
    std::vector<Scalar> log_values_;
};

/// Result of a sup-type norm evaluation, with the attaining index.
template <typename Scalar = double>
struct NormReport {
    LogMagnitude<Scalar> value;
    MultiIndex argmax_alpha;
    std::optional<std::size_t> argmax_point; // germ mode only
    bool finite_guess = false;               // heuristic, see classify_growth
    std::map<int, bool> heuristic_finite;     // filled by callers that ran classify_growth
};

namespace detail {

/// max over rows of [row_sup + log_weight(|alpha|)], ties resolved towards
/// the lexicographically smallest alpha, then the lowest grid index.
template <typename Scalar, typename LogWeight>
NormReport<Scalar> weighted_sup(const TruncatedElement<Scalar>& e, LogWeight&& log_weight) {
    const IndexTable& table = e.indices();
    NormReport<Scalar> best;
    bool have = false;
    std::size_t best_point = 0;
    for (std::size_t n = 0; n <= table.order_cap(); ++n) {
        const Scalar w = log_weight(n);
        for (std::size_t row = table.shell_begin(n); row < table.shell_end(n); ++row) {
            auto [sup, point] = row_sup(e, row);
            const Scalar contribution = sup.log_value + w;
            const bool better = !have || contribution > best.value.log_value ||
                                (contribution == best.value.log_value &&
                                 (table[row] < best.argmax_alpha ||
                                  (table[row] == best.argmax_alpha && point < best_point)));
            if (better) {
                best.value = {contribution};
                best.argmax_alpha = table[row];
                best_point = point;
                have = true;
            }
        }
    }
    if (e.mode() == PayloadMode::germ) {
        best.argmax_point = best_point;
    }
    return best;
}

} // namespace detail

/// Step norm ||x||_k = sup_alpha ||x_alpha|| k^{-|alpha|}, evaluated in log
/// form over the truncation |alpha| <= N.
template <typename Scalar>
NormReport<Scalar> norm_k(const TruncatedElement<Scalar>& e, int k) {
    if (k < 1) {
        throw InputError("norm_k: k must be >= 1, got " + std::to_string(k));
    }
    using std::log;
    const Scalar log_k = log(static_cast<Scalar>(k));
    return detail::weighted_sup(e, [&](std::size_t n) { return -static_cast<Scalar>(n) * log_k; });
}

/// |x|_delta = sup_alpha ||x_alpha|| delta_{|alpha|}^{|alpha|}.
/// The zero shell always carries weight 1, whatever delta_0 is.
template <typename Scalar>
NormReport<Scalar> seminorm_delta(const TruncatedElement<Scalar>& e, const WeightSequence<Scalar>& delta) {
    if (delta.size() < e.order_cap() + 1) {
        throw ShapeError("seminorm_delta: weights cover indices < " + std::to_string(delta.size()) +
                         ", element needs up to " + std::to_string(e.order_cap()));
    }
    return detail::weighted_sup(e, [&](std::size_t n) {
        return n == 0 ? Scalar(0) : static_cast<Scalar>(n) * delta.log_value(n);
    });
}

/// max_{0<=n<=N} (k delta_n)^n, the constant C with |x|_delta <= C ||x||_k
/// on the truncated step space.
template <typename Scalar>
LogMagnitude<Scalar> continuity_constant(const WeightSequence<Scalar>& delta, int k, std::size_t order_cap) {
    if (k < 1) {
        throw InputError("continuity_constant: k must be >= 1");
    }
    if (delta.size() < order_cap + 1) {
        throw ShapeError("continuity_constant: weights shorter than truncation order");
    }
    using std::log;
    const Scalar log_k = log(static_cast<Scalar>(k));
    Scalar best = 0;
    for (std::size_t n = 1; n <= order_cap; ++n) {
        best = std::max(best, static_cast<Scalar>(n) * (log_k + delta.log_value(n)));
    }
    return {best};
}

/// Per-order growth rates of the largest coefficient in each shell.
template <typename Scalar = double>
struct GrowthReport {
    struct Rate {
        std::size_t n;
        LogMagnitude<Scalar> shell_max; // max_{|alpha|=n} payload_sup
        Scalar root_rate;               // s_n = shell_max / n (-inf for empty shells)
    };
    std::vector<Rate> rates;            // n = 1..N
    Scalar estimate = -std::numeric_limits<Scalar>::infinity();
    std::size_t window = 0;
    std::map<int, bool> finite_guess;   // heuristic: exp(estimate) <= k
};

/// Heuristic guess at the smallest k with ||e||_k finite.
///
/// The estimate is the largest per-order rate over the last `window` shells,
/// where each shell contributes both its root rate s_n = ln M_n / n and its
/// ratio rate ln M_n - ln M_{n-1}. Taking the larger of the two keeps the
/// guess from flagging superexponential growth (n!) as finite at moderate N.
/// A truncated sequence cannot decide membership; the result is a guess.
template <typename Scalar>
GrowthReport<Scalar> classify_growth(const TruncatedElement<Scalar>& e, std::size_t window, int k_max = 20) {
    const std::size_t N = e.order_cap();
    if (window == 0 || window > N) {
        throw InputError("classify_growth: window must be in [1, N], got " + std::to_string(window));
    }
    const IndexTable& table = e.indices();
    std::vector<LogMagnitude<Scalar>> shell_max(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        for (std::size_t row = table.shell_begin(n); row < table.shell_end(n); ++row) {
            shell_max[n] = std::max(shell_max[n], row_sup(e, row).first);
        }
    }

    GrowthReport<Scalar> report;
    report.window = window;
    constexpr Scalar neg_inf = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t n = 1; n <= N; ++n) {
        const Scalar s = shell_max[n].is_zero() ? neg_inf : shell_max[n].log_value / static_cast<Scalar>(n);
        report.rates.push_back({n, shell_max[n], s});
    }
    for (std::size_t n = N - window + 1; n <= N; ++n) {
        const auto& r = report.rates[n - 1];
        report.estimate = std::max(report.estimate, r.root_rate);
        if (!shell_max[n].is_zero() && !shell_max[n - 1].is_zero()) {
            report.estimate = std::max(report.estimate, shell_max[n].log_value - shell_max[n - 1].log_value);
        }
    }
    using std::log;
    for (int k = 1; k <= k_max; ++k) {
        // small slack so exact geometric rates land on the boundary k
        report.finite_guess[k] = report.estimate <= log(static_cast<Scalar>(k)) + Scalar(1e-12);
    }
    return report;
}

} // namespace germnorm

#endif // GERMNORM_NORMS_HPP
