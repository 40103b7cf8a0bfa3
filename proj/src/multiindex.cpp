#include "germnorm/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace germnorm {

MultiIndex::MultiIndex(std::vector<value_type> entries)
    : entries_(std::move(entries)),
      order_(std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0})) {}

MultiIndex::MultiIndex(std::initializer_list<value_type> entries)
    : MultiIndex(std::vector<value_type>(entries)) {}

MultiIndex MultiIndex::zero(std::size_t dim) {
    return MultiIndex(std::vector<value_type>(dim, 0));
}

std::uint64_t binomial(std::uint64_t m, std::uint64_t r) {
    if (r > m) {
        return 0;
    }
    r = std::min(r, m - r);
    // Partial results C(m-r+i, i) never exceed the final value, so a 128-bit
    // intermediate is enough to detect overflow of the result.
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        c = c * (m - r + i) / i;
        if (c > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("binomial(" + std::to_string(m) + ", " + std::to_string(r) +
                                      ") exceeds 64-bit range");
        }
    }
    return static_cast<std::uint64_t>(c);
}

std::uint64_t shell_count(std::size_t dim, std::size_t n) {
    if (dim == 0) {
        throw std::invalid_argument("shell_count: dimension must be positive");
    }
    return binomial(n + dim - 1, dim - 1);
}

namespace {

void fill_shell(std::vector<MultiIndex::value_type>& prefix, std::size_t dim, std::size_t remaining,
                std::vector<MultiIndex>& out) {
    if (prefix.size() + 1 == dim) {
        prefix.push_back(static_cast<MultiIndex::value_type>(remaining));
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
        prefix.push_back(static_cast<MultiIndex::value_type>(v));
        fill_shell(prefix, dim, remaining - v, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<MultiIndex> shell(std::size_t dim, std::size_t n) {
    if (dim == 0) {
        throw std::invalid_argument("shell: dimension must be positive");
    }
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(shell_count(dim, n)));
    std::vector<MultiIndex::value_type> prefix;
    prefix.reserve(dim);
    fill_shell(prefix, dim, n, out);
    return out;
}

std::uint64_t shell_rank(const MultiIndex& alpha) {
    const std::size_t dim = alpha.dim();
    std::uint64_t rank = 0;
    std::uint64_t remaining = alpha.order();
    for (std::size_t j = 0; j + 1 < dim; ++j) {
        // indices sharing the prefix but with a smaller entry at position j
        for (std::uint64_t v = 0; v < alpha[j]; ++v) {
            rank += shell_count(dim - j - 1, static_cast<std::size_t>(remaining - v));
        }
        remaining -= alpha[j];
    }
    return rank;
}

double log_factorial(const MultiIndex& alpha) {
    double sum = 0.0;
    for (auto a : alpha.entries()) {
        if (a > 1) {
            sum += std::lgamma(static_cast<double>(a) + 1.0);
        }
    }
    return sum;
}

IndexTable::IndexTable(std::size_t dim, std::size_t order_cap) : dim_(dim), order_cap_(order_cap) {
    if (dim == 0) {
        throw std::invalid_argument("IndexTable: dimension must be positive");
    }
    offsets_.reserve(order_cap + 2);
    for (std::size_t n = 0; n <= order_cap; ++n) {
        offsets_.push_back(indices_.size());
        auto s = shell(dim, n);
        indices_.insert(indices_.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    offsets_.push_back(indices_.size());
}

std::size_t IndexTable::shell_begin(std::size_t n) const {
    if (n > order_cap_ + 1) {
        throw std::out_of_range("IndexTable: shell " + std::to_string(n) + " beyond truncation order");
    }
    return offsets_[n];
}

std::size_t IndexTable::row_of(const MultiIndex& alpha) const {
    if (alpha.dim() != dim_) {
        throw std::out_of_range("IndexTable: index dimension " + std::to_string(alpha.dim()) +
                                " does not match table dimension " + std::to_string(dim_));
    }
    if (alpha.order() > order_cap_) {
        throw std::out_of_range("IndexTable: |alpha| = " + std::to_string(alpha.order()) +
                                " exceeds truncation order " + std::to_string(order_cap_));
    }
    return offsets_[alpha.order()] + static_cast<std::size_t>(shell_rank(alpha));
}

} // namespace germnorm
