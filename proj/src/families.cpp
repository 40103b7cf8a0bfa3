#include "germnorm/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "germnorm/errors.hpp"

namespace germnorm {

std::string to_string(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::cauchy: return "cauchy";
    case FamilyKind::exponential: return "exponential";
    case FamilyKind::polynomial: return "polynomial";
    case FamilyKind::geometric_scalar: return "geometric_scalar";
    case FamilyKind::factorial_scalar: return "factorial_scalar";
    }
    return "unknown";
}

FamilyKind parse_family_kind(const std::string& name) {
    for (auto kind : {FamilyKind::cauchy, FamilyKind::exponential, FamilyKind::polynomial,
                      FamilyKind::geometric_scalar, FamilyKind::factorial_scalar}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InputError("unknown family '" + name + "'");
}

std::shared_ptr<const CompactGridD> default_grid(std::size_t dim, const std::vector<double>& axis) {
    return std::make_shared<const CompactGridD>(CompactGridD::tensor(dim, axis, "cube"));
}

namespace {

using Coefficients = TruncatedElementD::Coefficients;

const std::vector<double>& param(const FamilySpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end() || it->second.empty()) {
        throw InputError(to_string(spec.kind) + ": missing parameter '" + key + "'");
    }
    return it->second;
}

double single_param(const FamilySpec& spec, const std::string& key) {
    const auto& v = param(spec, key);
    if (v.size() != 1) {
        throw InputError(to_string(spec.kind) + ": parameter '" + key + "' takes one value");
    }
    return v.front();
}

TruncatedElementD generate_cauchy(const FamilySpec& spec, std::shared_ptr<const IndexTable> table) {
    const auto& grid = *spec.grid;
    std::vector<double> poles = param(spec, "a");
    if (poles.size() == 1) {
        poles.assign(spec.dim, poles.front());
    }
    if (poles.size() != spec.dim) {
        throw InputError("cauchy: expected 1 or " + std::to_string(spec.dim) + " pole coordinates");
    }
    for (std::size_t j = 0; j < spec.dim; ++j) {
        const double top = grid.points().col(static_cast<Eigen::Index>(j)).maxCoeff();
        if (!(poles[j] > top)) {
            throw InputError("cauchy: pole coordinate a_" + std::to_string(j + 1) + " = " + std::to_string(poles[j]) +
                             " must exceed the grid maximum " + std::to_string(top));
        }
    }
    Coefficients c(static_cast<Eigen::Index>(table->size()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t row = 0; row < table->size(); ++row) {
        const MultiIndex& alpha = (*table)[row];
        for (std::size_t p = 0; p < grid.size(); ++p) {
            double v = 1.0;
            for (std::size_t j = 0; j < spec.dim; ++j) {
                v *= std::pow(poles[j] - grid.point(p)(static_cast<Eigen::Index>(j)), -(static_cast<double>(alpha[j]) + 1.0));
            }
            c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p)) = v;
        }
    }
    return TruncatedElementD(std::move(table), std::move(c), spec.grid);
}

TruncatedElementD generate_exponential(const FamilySpec& spec, std::shared_ptr<const IndexTable> table) {
    const auto& grid = *spec.grid;
    Coefficients c(static_cast<Eigen::Index>(table->size()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t row = 0; row < table->size(); ++row) {
        const double lf = log_factorial((*table)[row]);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p)) = std::exp(grid.point(p).sum() - lf);
        }
    }
    return TruncatedElementD(std::move(table), std::move(c), spec.grid);
}

// d^alpha x^beta / alpha! = prod_j C(beta_j, alpha_j) x_j^{beta_j - alpha_j}
TruncatedElementD generate_polynomial(const FamilySpec& spec, std::shared_ptr<const IndexTable> table) {
    const auto& grid = *spec.grid;
    if (spec.monomials.empty()) {
        throw InputError("polynomial: no terms given");
    }
    for (const auto& m : spec.monomials) {
        if (m.powers.dim() != spec.dim) {
            throw InputError("polynomial: term exponent has wrong dimension");
        }
    }
    Coefficients c = Coefficients::Zero(static_cast<Eigen::Index>(table->size()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t row = 0; row < table->size(); ++row) {
        const MultiIndex& alpha = (*table)[row];
        for (const auto& m : spec.monomials) {
            bool divides = true;
            double binom = 1.0;
            for (std::size_t j = 0; j < spec.dim && divides; ++j) {
                divides = alpha[j] <= m.powers[j];
                if (divides) {
                    binom *= static_cast<double>(binomial(m.powers[j], alpha[j]));
                }
            }
            if (!divides) {
                continue;
            }
            for (std::size_t p = 0; p < grid.size(); ++p) {
                double v = m.coeff * binom;
                for (std::size_t j = 0; j < spec.dim; ++j) {
                    v *= std::pow(grid.point(p)(static_cast<Eigen::Index>(j)), static_cast<int>(m.powers[j] - alpha[j]));
                }
                c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(p)) += v;
            }
        }
    }
    return TruncatedElementD(std::move(table), std::move(c), spec.grid);
}

template <typename ShellValue>
TruncatedElementD generate_scalar(std::shared_ptr<const IndexTable> table, ShellValue&& value) {
    Coefficients c(static_cast<Eigen::Index>(table->size()), 1);
    for (std::size_t n = 0; n <= table->order_cap(); ++n) {
        const double v = value(n);
        for (std::size_t row = table->shell_begin(n); row < table->shell_end(n); ++row) {
            c(static_cast<Eigen::Index>(row), 0) = v;
        }
    }
    return TruncatedElementD(std::move(table), std::move(c));
}

} // namespace

TruncatedElementD generate(const FamilySpec& spec) {
    if (spec.dim == 0) {
        throw InputError("family dimension must be positive");
    }
    auto table = std::make_shared<const IndexTable>(spec.dim, spec.order_cap);
    if (spec.is_germ()) {
        FamilySpec with_grid = spec;
        if (!with_grid.grid) {
            with_grid.grid = default_grid(spec.dim);
        }
        if (with_grid.grid->dim() != spec.dim) {
            throw ShapeError("family grid dimension differs from family dimension");
        }
        switch (spec.kind) {
        case FamilyKind::cauchy: return generate_cauchy(with_grid, std::move(table));
        case FamilyKind::exponential: return generate_exponential(with_grid, std::move(table));
        default: return generate_polynomial(with_grid, std::move(table));
        }
    }
    if (spec.kind == FamilyKind::geometric_scalar) {
        const double r = single_param(spec, "r");
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw InputError("geometric_scalar: ratio must be a nonnegative number");
        }
        return generate_scalar(std::move(table), [r](std::size_t n) { return std::pow(r, static_cast<double>(n)); });
    }
    return generate_scalar(std::move(table), [](std::size_t n) {
        double f = 1.0;
        for (std::size_t i = 2; i <= n; ++i) {
            f *= static_cast<double>(i);
        }
        return f;
    });
}

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t i) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations so runs are reproducible everywhere.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

TruncatedElementD random_element(const SampleOptions& opts, std::uint64_t seed, const std::vector<double>& profile) {
    auto table = std::make_shared<const IndexTable>(opts.dim, opts.order_cap);
    std::shared_ptr<const CompactGridD> grid;
    if (opts.mode == PayloadMode::germ) {
        grid = opts.grid ? opts.grid : default_grid(opts.dim, {0.0, 1.0});
    }
    const Eigen::Index width = grid ? static_cast<Eigen::Index>(grid->size()) : 1;
    Coefficients c(static_cast<Eigen::Index>(table->size()), width);

    std::mt19937_64 rng(seed);
    // per-element spread of the offsets, so some draws are spiky and some flat
    const double spread = 0.25 + 4.0 * uniform01(rng);
    for (std::size_t row = 0; row < table->size(); ++row) {
        const std::size_t n = table->order_of(row);
        const double base = n < profile.size() ? profile[n] : 0.0;
        for (Eigen::Index p = 0; p < width; ++p) {
            const double u = uniform01(rng);
            const double offset = -std::log1p(-uniform01(rng)) * spread;
            const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
            c(static_cast<Eigen::Index>(row), p) = u < opts.zero_probability ? 0.0 : sign * std::exp(base - offset);
        }
    }
    return TruncatedElementD(std::move(table), std::move(c), std::move(grid));
}

TruncatedElementD random_unit_element(const SampleOptions& opts, std::uint64_t seed, const WeightSequence<double>& delta) {
    std::vector<double> profile(opts.order_cap + 1, 0.0);
    for (std::size_t n = 1; n <= opts.order_cap; ++n) {
        profile[n] = -static_cast<double>(n) * delta.log_value(n);
    }
    auto x = random_element(opts, seed, profile);
    const auto s = seminorm_delta(x, delta).value;
    if (s.is_zero()) {
        return x;
    }
    return scale(x, std::exp(-s.log_value));
}

} // namespace germnorm
