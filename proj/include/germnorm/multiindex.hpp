#ifndef GERMNORM_MULTIINDEX_HPP
#define GERMNORM_MULTIINDEX_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace germnorm {

/// A d-tuple of nonnegative integers with cached order |alpha|.
///
/// Comparison operators are lexicographic on the entries; indices of
/// different dimension compare by their entry sequences as well, so callers
/// are expected to compare indices of the same dimension only.
class MultiIndex {
public:
    using value_type = std::uint32_t;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<value_type> entries);
    MultiIndex(std::initializer_list<value_type> entries);

    static MultiIndex zero(std::size_t dim);

    std::size_t dim() const noexcept { return entries_.size(); }
    std::uint64_t order() const noexcept { return order_; }
    value_type operator[](std::size_t j) const { return entries_[j]; }
    std::span<const value_type> entries() const noexcept { return entries_; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept {
        return a.entries_ == b.entries_;
    }
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
        return a.entries_ <=> b.entries_;
    }

private:
    std::vector<value_type> entries_;
    std::uint64_t order_ = 0;
};

/// Exact binomial coefficient C(m, r). Throws std::overflow_error when the
/// result does not fit into 64 bits.
std::uint64_t binomial(std::uint64_t m, std::uint64_t r);

/// Number of indices of order n in dimension d, C(n+d-1, d-1).
std::uint64_t shell_count(std::size_t dim, std::size_t n);

/// All indices of order n in dimension d, lexicographically ascending.
std::vector<MultiIndex> shell(std::size_t dim, std::size_t n);

/// Position of alpha inside shell(alpha.dim(), alpha.order()).
std::uint64_t shell_rank(const MultiIndex& alpha);

/// ln(alpha!) = sum_j ln(alpha_j!).
double log_factorial(const MultiIndex& alpha);

/// Dense table of every multi-index with |alpha| <= N, stored shell by shell
/// (graded), lexicographic inside a shell. Rows of coefficient matrices are
/// laid out in this order, so a shell range [lo, hi) is a contiguous block of
/// rows.
class IndexTable {
public:
    IndexTable(std::size_t dim, std::size_t order_cap);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t order_cap() const noexcept { return order_cap_; }
    std::size_t size() const noexcept { return indices_.size(); }

    const MultiIndex& operator[](std::size_t row) const { return indices_[row]; }
    std::size_t order_of(std::size_t row) const { return static_cast<std::size_t>(indices_[row].order()); }

    /// First row of shell n; shell_begin(N+1) == size().
    std::size_t shell_begin(std::size_t n) const;
    std::size_t shell_end(std::size_t n) const { return shell_begin(n + 1); }

    /// Row of alpha. Throws std::out_of_range if |alpha| > N or the dimension differs.
    std::size_t row_of(const MultiIndex& alpha) const;

    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }

    friend bool operator==(const IndexTable& a, const IndexTable& b) noexcept {
        return a.dim_ == b.dim_ && a.order_cap_ == b.order_cap_;
    }

private:
    std::size_t dim_;
    std::size_t order_cap_;
    std::vector<MultiIndex> indices_;
    std::vector<std::size_t> offsets_;
};

} // namespace germnorm

#endif // GERMNORM_MULTIINDEX_HPP
