#ifndef GERMNORM_LEMMA_HPP
#define GERMNORM_LEMMA_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "germnorm/errors.hpp"
#include "germnorm/germspace.hpp"
#include "germnorm/norms.hpp"

namespace germnorm {

/// Positive sequence eps_1, eps_2, ... with every entry clamped to (0, 1].
///
/// Indices beyond the stored entries repeat the last entry, so a finite
/// list acts as an eventually constant sequence.
template <typename Scalar = double>
class EpsSequence {
public:
    static EpsSequence from_values(const std::vector<Scalar>& values) {
        std::vector<Scalar> logs;
        logs.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > Scalar(0)) || !std::isfinite(static_cast<double>(values[i]))) {
                throw InputError("EpsSequence: eps_" + std::to_string(i + 1) + " must be positive and finite");
            }
            using std::log;
            logs.push_back(log(values[i]));
        }
        return from_log_values(std::move(logs));
    }

    static EpsSequence from_log_values(std::vector<Scalar> logs) {
        if (logs.empty()) {
            throw InputError("EpsSequence: empty sequence");
        }
        EpsSequence eps;
        for (auto& l : logs) {
            if (std::isnan(static_cast<double>(l)) || l == -std::numeric_limits<Scalar>::infinity()) {
                throw InputError("EpsSequence: entries must be positive");
            }
            if (l > Scalar(0)) {
                l = Scalar(0);
                ++eps.clamped_;
            }
        }
        eps.logs_ = std::move(logs);
        return eps;
    }

    /// Number of stored entries.
    std::size_t size() const noexcept { return logs_.size(); }
    /// Number of inputs that exceeded 1 and were clamped.
    std::size_t clamped_count() const noexcept { return clamped_; }

    Scalar log_value(std::size_t k) const {
        if (k == 0) {
            throw std::out_of_range("EpsSequence: indices start at 1");
        }
        return logs_[std::min(k, logs_.size()) - 1];
    }
    Scalar value(std::size_t k) const {
        using std::exp;
        return exp(log_value(k));
    }

private:
    std::vector<Scalar> logs_;
    std::size_t clamped_ = 0;
};

/// Jump sequence n_1 < n_2 < ... and the weights delta_n built from eps.
///
/// delta_n = 1 / (eps_k^{1/n_k} k) on n_k <= n < n_{k+1}; the last segment
/// extends to the truncation order. delta_0 is stored as 1 and never used
/// as a weight.
template <typename Scalar = double>
struct DeltaSystem {
    std::vector<std::size_t> jumps;    // jumps[k-1] = n_k
    WeightSequence<Scalar> deltas;     // indices 0..order_cap
    EpsSequence<Scalar> eps;
    std::size_t order_cap = 0;
    std::size_t margin = 0;

    std::size_t segments() const noexcept { return jumps.size(); }

    /// k governing order n (n = 0 belongs to the first segment).
    std::size_t governing(std::size_t n) const {
        if (n > order_cap) {
            throw std::out_of_range("DeltaSystem: order " + std::to_string(n) + " beyond truncation");
        }
        std::size_t k = 1;
        while (k < jumps.size() && jumps[k] <= n) {
            ++k;
        }
        return k;
    }

    /// [n_k, n_{k+1}) clipped to the truncation, as shell bounds.
    std::pair<std::size_t, std::size_t> segment(std::size_t k) const {
        const std::size_t lo = jumps.at(k - 1);
        const std::size_t hi = k < jumps.size() ? jumps[k] : order_cap + 1;
        return {lo, hi};
    }
};

using DeltaSystemD = DeltaSystem<double>;

namespace detail {

/// k - 1 < eps_k^{1/n} k, in logarithmic form.
template <typename Scalar>
bool jump_condition(std::size_t k, Scalar log_eps, std::size_t n) {
    if (k == 1) {
        return true;
    }
    using std::log;
    return log(static_cast<Scalar>(k - 1)) < log_eps / static_cast<Scalar>(n) + log(static_cast<Scalar>(k));
}

} // namespace detail

/// Builds the minimal jump sequence for eps and the resulting weights up to
/// order_cap. With margin > 0 every n_k for k >= 2 is shifted by margin
/// past its minimal value.
template <typename Scalar>
DeltaSystem<Scalar> build_delta(const EpsSequence<Scalar>& eps, std::size_t order_cap, std::size_t margin = 0) {
    if (order_cap < 1) {
        throw InputError("build_delta: truncation order must be >= 1");
    }
    using std::floor;
    using std::log;
    DeltaSystem<Scalar> ds{{}, {}, eps, order_cap, margin};
    std::size_t prev = 0;
    for (std::size_t k = 1;; ++k) {
        std::size_t n = prev + 1;
        if (k >= 2) {
            const Scalar log_eps = eps.log_value(k);
            // n > -ln eps_k / ln(k/(k-1)); start near the real root and settle
            // on the smallest integer passing the direct check.
            const Scalar root = -log_eps / (log(static_cast<Scalar>(k)) - log(static_cast<Scalar>(k - 1)));
            if (root > static_cast<Scalar>(order_cap + 1)) {
                break;
            }
            n = std::max(n, static_cast<std::size_t>(floor(root)) + 1);
            while (n > prev + 1 && detail::jump_condition(k, log_eps, n - 1)) {
                --n;
            }
            while (!detail::jump_condition(k, log_eps, n)) {
                ++n;
            }
            n += margin;
        }
        if (n > order_cap) {
            break;
        }
        ds.jumps.push_back(n);
        prev = n;
    }

    std::vector<Scalar> log_delta(order_cap + 1, Scalar(0));
    std::size_t k = 1;
    for (std::size_t n = 1; n <= order_cap; ++n) {
        while (k < ds.jumps.size() && ds.jumps[k] <= n) {
            ++k;
        }
        const Scalar n_k = static_cast<Scalar>(ds.jumps[k - 1]);
        // + 0 turns a -0 from eps_1 = 1 into +0
        log_delta[n] = -(eps.log_value(k) / n_k + log(static_cast<Scalar>(k))) + Scalar(0);
    }
    ds.deltas = WeightSequence<Scalar>::from_log_values(std::move(log_delta));
    return ds;
}

template <typename Scalar = double>
struct WeightBoundCheck {
    std::size_t n;
    std::size_t k;
    Scalar margin; // ln eps_k + n ln k - (-n ln delta_n)
};

template <typename Scalar = double>
struct WeightBoundReport {
    std::vector<WeightBoundCheck<Scalar>> checks;
    Scalar worst_margin = std::numeric_limits<Scalar>::infinity();
    bool pass = true;
};

inline constexpr double weight_bound_tolerance = 1e-9;
inline constexpr double inclusion_tolerance = 1e-9;

/// Checks delta_n^{-n} <= eps_k k^n for 1 <= n <= N.
template <typename Scalar>
WeightBoundReport<Scalar> verify_weight_bound(const DeltaSystem<Scalar>& ds, std::size_t order_cap) {
    if (order_cap > ds.order_cap) {
        throw ShapeError("verify_weight_bound: delta system covers orders up to " + std::to_string(ds.order_cap));
    }
    using std::log;
    WeightBoundReport<Scalar> report;
    for (std::size_t n = 1; n <= order_cap; ++n) {
        const std::size_t k = ds.governing(n);
        const Scalar nn = static_cast<Scalar>(n);
        const Scalar lhs = -nn * ds.deltas.log_value(n);
        const Scalar rhs = ds.eps.log_value(k) + nn * log(static_cast<Scalar>(k));
        const Scalar margin = rhs - lhs;
        report.checks.push_back({n, k, margin});
        report.worst_margin = std::min(report.worst_margin, margin);
        if (margin < -Scalar(weight_bound_tolerance)) {
            report.pass = false;
        }
    }
    return report;
}

/// How the zero shell was assigned in a decomposition.
enum class ZeroShellConvention {
    absorbed,       // carried by block 1, since ||x_0|| <= eps_1
    separate_block, // ||x_0|| > eps_1: emitted as block 0 with bound 1
};

template <typename Scalar = double>
struct Block {
    std::size_t k; // 0 only for a separate zero-shell block
    std::size_t lo;
    std::size_t hi;
    TruncatedElement<Scalar> xi;
    LogMagnitude<Scalar> certified_norm; // ||xi||_k (||xi||_1 for block 0)
    Scalar log_bound;                    // ln eps_k, or 0 for block 0
};

template <typename Scalar = double>
struct BlockDecomposition {
    std::vector<Block<Scalar>> blocks;
    ZeroShellConvention zero_shell = ZeroShellConvention::absorbed;
};

/// Splits x by order ranges [n_k, n_{k+1}) and certifies each piece in the
/// step norm of its own k. Blocks are masked copies of x.
template <typename Scalar>
BlockDecomposition<Scalar> decompose(const TruncatedElement<Scalar>& x, const DeltaSystem<Scalar>& ds) {
    if (ds.order_cap < x.order_cap()) {
        throw ShapeError("decompose: delta system covers orders up to " + std::to_string(ds.order_cap) +
                         ", element has order " + std::to_string(x.order_cap()));
    }
    BlockDecomposition<Scalar> out;
    const auto shell0 = row_sup(x, 0).first;
    if (shell0.log_value > ds.eps.log_value(1)) {
        out.zero_shell = ZeroShellConvention::separate_block;
        auto xi = restrict_shells(x, 0, 1);
        auto cert = norm_k(xi, 1).value;
        out.blocks.push_back({0, 0, 1, std::move(xi), cert, Scalar(0)});
    }
    const std::size_t N = x.order_cap();
    for (std::size_t k = 1; k <= ds.segments(); ++k) {
        auto [lo, hi] = ds.segment(k);
        if (lo > N) {
            break;
        }
        hi = std::min(hi, N + 1);
        if (k == ds.segments()) {
            hi = N + 1;
        }
        if (k == 1 && out.zero_shell == ZeroShellConvention::absorbed) {
            lo = 0;
        }
        auto xi = restrict_shells(x, lo, hi);
        auto cert = norm_k(xi, static_cast<int>(k)).value;
        out.blocks.push_back({k, lo, hi, std::move(xi), cert, ds.eps.log_value(k)});
    }
    return out;
}

/// Sum of all blocks.
template <typename Scalar>
TruncatedElement<Scalar> reconstruct(const BlockDecomposition<Scalar>& bd) {
    if (bd.blocks.empty()) {
        throw ShapeError("reconstruct: empty decomposition");
    }
    TruncatedElement<Scalar> sum = bd.blocks.front().xi;
    for (std::size_t i = 1; i < bd.blocks.size(); ++i) {
        sum = add(sum, bd.blocks[i].xi);
    }
    return sum;
}

template <typename Scalar = double>
struct InclusionCertificate {
    struct Entry {
        std::size_t k;
        std::size_t lo;
        std::size_t hi;
        LogMagnitude<Scalar> certified_norm;
        Scalar log_bound;
        Scalar margin; // log_bound - certified_norm (+inf for empty blocks)
    };
    LogMagnitude<Scalar> seminorm;          // |x|_delta of the input
    bool rescaled = false;                  // input was pulled back onto |x|_delta = 1
    ZeroShellConvention zero_shell = ZeroShellConvention::absorbed;
    std::vector<Entry> blocks;
    Scalar worst_margin = std::numeric_limits<Scalar>::infinity();
    bool pass = true;
};

/// Executes the inclusion U_delta in sum_k eps_k B_k for a single element:
/// rescales x onto the unit ball of |.|_delta when needed, decomposes it and
/// checks ||xi_k||_k <= eps_k block by block.
template <typename Scalar>
InclusionCertificate<Scalar> verify_inclusion(const TruncatedElement<Scalar>& x, const DeltaSystem<Scalar>& ds) {
    InclusionCertificate<Scalar> cert;
    cert.seminorm = seminorm_delta(x, ds.deltas).value;
    BlockDecomposition<Scalar> bd;
    if (cert.seminorm.log_value > Scalar(0)) {
        using std::exp;
        cert.rescaled = true;
        bd = decompose(scale(x, exp(-cert.seminorm.log_value)), ds);
    } else {
        bd = decompose(x, ds);
    }
    cert.zero_shell = bd.zero_shell;
    for (const auto& b : bd.blocks) {
        const Scalar margin = b.certified_norm.is_zero() ? std::numeric_limits<Scalar>::infinity()
                                                         : b.log_bound - b.certified_norm.log_value;
        cert.blocks.push_back({b.k, b.lo, b.hi, b.certified_norm, b.log_bound, margin});
        cert.worst_margin = std::min(cert.worst_margin, margin);
        if (margin < -Scalar(inclusion_tolerance)) {
            cert.pass = false;
        }
    }
    return cert;
}

/// Scalar-mode element x_alpha = delta_{|alpha|}^{-|alpha|} (x_0 = 1), which
/// sits on the unit sphere of |.|_delta.
template <typename Scalar>
TruncatedElement<Scalar> boundary_element(const DeltaSystem<Scalar>& ds, std::size_t dim, std::size_t order_cap) {
    if (order_cap > ds.order_cap) {
        throw ShapeError("boundary_element: delta system too short");
    }
    auto table = std::make_shared<const IndexTable>(dim, order_cap);
    typename TruncatedElement<Scalar>::Coefficients c(static_cast<Eigen::Index>(table->size()), 1);
    using std::exp;
    for (std::size_t n = 0; n <= order_cap; ++n) {
        const Scalar v = n == 0 ? Scalar(1) : exp(-static_cast<Scalar>(n) * ds.deltas.log_value(n));
        for (std::size_t row = table->shell_begin(n); row < table->shell_end(n); ++row) {
            c(static_cast<Eigen::Index>(row), 0) = v;
        }
    }
    return TruncatedElement<Scalar>(std::move(table), std::move(c));
}

} // namespace germnorm

#endif // GERMNORM_LEMMA_HPP
