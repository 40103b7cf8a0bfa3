#ifndef GERMNORM_GERMSPACE_HPP
#define GERMNORM_GERMSPACE_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "germnorm/errors.hpp"
#include "germnorm/log_magnitude.hpp"
#include "germnorm/multiindex.hpp"

namespace germnorm {

/// Finite sample of a compact set K in R^d. One point per row.
template <typename Scalar = double>
class CompactGrid {
public:
    using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit CompactGrid(Points points, std::string label = {})
        : points_(std::move(points)), label_(std::move(label)) {
        if (points_.rows() == 0 || points_.cols() == 0) {
            throw ShapeError("CompactGrid: need at least one point of positive dimension");
        }
        if (!points_.allFinite()) {
            throw InputError("CompactGrid: non-finite coordinate");
        }
        for (Eigen::Index i = 0; i < points_.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < points_.rows(); ++j) {
                if (points_.row(i) == points_.row(j)) {
                    throw InputError("CompactGrid: duplicate point at rows " + std::to_string(i) + " and " +
                                     std::to_string(j));
                }
            }
        }
    }

    /// Tensor product axis x axis x ... x axis in dimension dim; the last
    /// coordinate varies fastest.
    static CompactGrid tensor(std::size_t dim, std::span<const Scalar> axis, std::string label = {}) {
        if (dim == 0 || axis.empty()) {
            throw ShapeError("CompactGrid::tensor: empty axis or zero dimension");
        }
        Eigen::Index count = 1;
        for (std::size_t j = 0; j < dim; ++j) {
            count *= static_cast<Eigen::Index>(axis.size());
        }
        Points pts(count, static_cast<Eigen::Index>(dim));
        for (Eigen::Index row = 0; row < count; ++row) {
            Eigen::Index rest = row;
            for (Eigen::Index j = static_cast<Eigen::Index>(dim) - 1; j >= 0; --j) {
                pts(row, j) = axis[static_cast<std::size_t>(rest % static_cast<Eigen::Index>(axis.size()))];
                rest /= static_cast<Eigen::Index>(axis.size());
            }
        }
        return CompactGrid(std::move(pts), std::move(label));
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    const Points& points() const noexcept { return points_; }
    auto point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }
    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const CompactGrid& a, const CompactGrid& b) {
        return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
               a.points_ == b.points_;
    }

private:
    Points points_;
    std::string label_;
};

enum class PayloadMode { scalar, germ };

/// Truncated element of the coefficient space: one payload vector per
/// multi-index |alpha| <= N.
///
/// In germ mode row alpha holds c_alpha = f^(alpha)/alpha! sampled on the
/// grid; in scalar mode the payload has length 1 and stands for the norm of
/// x_alpha in an abstract Banach space. Values are immutable once built.
template <typename Scalar = double>
class TruncatedElement {
public:
    using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Grid = CompactGrid<Scalar>;

    TruncatedElement(std::shared_ptr<const IndexTable> table, Coefficients coeffs,
                     std::shared_ptr<const Grid> grid = nullptr)
        : table_(std::move(table)), coeffs_(std::move(coeffs)), grid_(std::move(grid)) {
        if (!table_) {
            throw ShapeError("TruncatedElement: missing index table");
        }
        if (static_cast<std::size_t>(coeffs_.rows()) != table_->size()) {
            throw ShapeError("TruncatedElement: " + std::to_string(coeffs_.rows()) + " coefficient rows, expected " +
                             std::to_string(table_->size()));
        }
        if (coeffs_.cols() == 0) {
            throw ShapeError("TruncatedElement: payload length must be positive");
        }
        if (grid_) {
            if (grid_->size() != static_cast<std::size_t>(coeffs_.cols())) {
                throw ShapeError("TruncatedElement: payload length " + std::to_string(coeffs_.cols()) +
                                 " differs from grid size " + std::to_string(grid_->size()));
            }
            if (grid_->dim() != table_->dim()) {
                throw ShapeError("TruncatedElement: grid dimension differs from index dimension");
            }
        } else if (coeffs_.cols() != 1) {
            throw ShapeError("TruncatedElement: scalar mode requires payload length 1");
        }
        if (!coeffs_.allFinite()) {
            throw InputError("TruncatedElement: non-finite coefficient");
        }
    }

    static TruncatedElement zero_scalar(std::size_t dim, std::size_t order_cap) {
        auto table = std::make_shared<const IndexTable>(dim, order_cap);
        Coefficients c = Coefficients::Zero(static_cast<Eigen::Index>(table->size()), 1);
        return TruncatedElement(std::move(table), std::move(c));
    }

    static TruncatedElement zero_germ(std::shared_ptr<const Grid> grid, std::size_t order_cap) {
        if (!grid) {
            throw ShapeError("TruncatedElement::zero_germ: missing grid");
        }
        auto table = std::make_shared<const IndexTable>(grid->dim(), order_cap);
        Coefficients c = Coefficients::Zero(static_cast<Eigen::Index>(table->size()),
                                            static_cast<Eigen::Index>(grid->size()));
        return TruncatedElement(std::move(table), std::move(c), std::move(grid));
    }

    std::size_t dim() const noexcept { return table_->dim(); }
    std::size_t order_cap() const noexcept { return table_->order_cap(); }
    std::size_t payload_len() const noexcept { return static_cast<std::size_t>(coeffs_.cols()); }
    PayloadMode mode() const noexcept { return grid_ ? PayloadMode::germ : PayloadMode::scalar; }

    const IndexTable& indices() const noexcept { return *table_; }
    const std::shared_ptr<const IndexTable>& index_table() const noexcept { return table_; }
    const Coefficients& coeffs() const noexcept { return coeffs_; }
    const std::shared_ptr<const Grid>& grid() const noexcept { return grid_; }

    auto payload(const MultiIndex& alpha) const { return coeffs_.row(static_cast<Eigen::Index>(table_->row_of(alpha))); }

    bool is_zero() const { return (coeffs_.array() == Scalar(0)).all(); }

    /// Same dimension, truncation order, payload length and grid.
    bool same_shape(const TruncatedElement& other) const {
        if (dim() != other.dim() || order_cap() != other.order_cap() || payload_len() != other.payload_len()) {
            return false;
        }
        if (static_cast<bool>(grid_) != static_cast<bool>(other.grid_)) {
            return false;
        }
        return !grid_ || grid_ == other.grid_ || *grid_ == *other.grid_;
    }

    friend bool operator==(const TruncatedElement& a, const TruncatedElement& b) {
        return a.same_shape(b) && a.coeffs_ == b.coeffs_;
    }

private:
    std::shared_ptr<const IndexTable> table_;
    Coefficients coeffs_;
    std::shared_ptr<const Grid> grid_;
};

using TruncatedElementD = TruncatedElement<double>;
using CompactGridD = CompactGrid<double>;

/// Largest absolute payload entry of the given row, with the lowest grid
/// index attaining it.
template <typename Scalar>
std::pair<LogMagnitude<Scalar>, std::size_t> row_sup(const TruncatedElement<Scalar>& e, std::size_t row) {
    Eigen::Index at = 0;
    const Scalar m = e.coeffs().row(static_cast<Eigen::Index>(row)).cwiseAbs().maxCoeff(&at);
    if (m == Scalar(0)) {
        return {LogMagnitude<Scalar>::zero(), 0};
    }
    return {LogMagnitude<Scalar>::from_magnitude(m), static_cast<std::size_t>(at)};
}

/// log max_j |c_alpha(x_j)|; throws std::out_of_range when |alpha| > N.
template <typename Scalar>
LogMagnitude<Scalar> payload_sup(const TruncatedElement<Scalar>& e, const MultiIndex& alpha) {
    return row_sup(e, e.indices().row_of(alpha)).first;
}

template <typename Scalar>
TruncatedElement<Scalar> scale(const TruncatedElement<Scalar>& e, Scalar lambda) {
    typename TruncatedElement<Scalar>::Coefficients c = e.coeffs() * lambda;
    return TruncatedElement<Scalar>(e.index_table(), std::move(c), e.grid());
}

template <typename Scalar>
TruncatedElement<Scalar> add(const TruncatedElement<Scalar>& a, const TruncatedElement<Scalar>& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("add: operands differ in dimension, truncation order, payload length or grid");
    }
    typename TruncatedElement<Scalar>::Coefficients c = a.coeffs() + b.coeffs();
    return TruncatedElement<Scalar>(a.index_table(), std::move(c), a.grid());
}

template <typename Scalar>
TruncatedElement<Scalar> operator+(const TruncatedElement<Scalar>& a, const TruncatedElement<Scalar>& b) {
    return add(a, b);
}

template <typename Scalar>
TruncatedElement<Scalar> operator*(Scalar lambda, const TruncatedElement<Scalar>& e) {
    return scale(e, lambda);
}

/// Keeps the shells lo <= |alpha| < hi and zeroes the rest.
template <typename Scalar>
TruncatedElement<Scalar> restrict_shells(const TruncatedElement<Scalar>& e, std::size_t lo, std::size_t hi) {
    if (lo > hi || hi > e.order_cap() + 1) {
        throw std::out_of_range("restrict_shells: invalid range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                ") for truncation order " + std::to_string(e.order_cap()));
    }
    using Coefficients = typename TruncatedElement<Scalar>::Coefficients;
    Coefficients c = Coefficients::Zero(e.coeffs().rows(), e.coeffs().cols());
    const auto first = static_cast<Eigen::Index>(e.indices().shell_begin(lo));
    const auto last = static_cast<Eigen::Index>(e.indices().shell_begin(hi));
    c.middleRows(first, last - first) = e.coeffs().middleRows(first, last - first);
    return TruncatedElement<Scalar>(e.index_table(), std::move(c), e.grid());
}

/// Drops every shell above order_cap.
template <typename Scalar>
TruncatedElement<Scalar> truncate(const TruncatedElement<Scalar>& e, std::size_t order_cap) {
    if (order_cap > e.order_cap()) {
        throw ShapeError("truncate: order " + std::to_string(order_cap) + " exceeds the element's order " +
                         std::to_string(e.order_cap()));
    }
    if (order_cap == e.order_cap()) {
        return e;
    }
    auto table = std::make_shared<const IndexTable>(e.dim(), order_cap);
    typename TruncatedElement<Scalar>::Coefficients c = e.coeffs().topRows(static_cast<Eigen::Index>(table->size()));
    return TruncatedElement<Scalar>(std::move(table), std::move(c), e.grid());
}

} // namespace germnorm

#endif // GERMNORM_GERMSPACE_HPP
