#ifndef GERMNORM_FAMILIES_HPP
#define GERMNORM_FAMILIES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germnorm/germspace.hpp"
#include "germnorm/norms.hpp"

namespace germnorm {

enum class FamilyKind { cauchy, exponential, polynomial, geometric_scalar, factorial_scalar };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

/// One monomial coeff * x^powers of a polynomial family.
struct Monomial {
    double coeff;
    MultiIndex powers;
};

/// Closed-form test families.
///
/// cauchy:           c_alpha(x) = prod_j (a_j - x_j)^{-(alpha_j+1)}, params "a"
/// exponential:      c_alpha(x) = exp(sum_j x_j) / alpha!
/// polynomial:       Taylor coefficients of sum_i coeff_i x^{powers_i}
/// geometric_scalar: ||x_alpha|| = r^{|alpha|}, params "r"
/// factorial_scalar: ||x_alpha|| = |alpha|!
struct FamilySpec {
    FamilyKind kind = FamilyKind::cauchy;
    std::size_t dim = 1;
    std::size_t order_cap = 20;
    std::map<std::string, std::vector<double>> params;
    std::vector<Monomial> monomials;          // polynomial only
    std::shared_ptr<const CompactGridD> grid; // germ kinds; default [0,1]^d sampled at {0, 0.5, 1}

    bool is_germ() const noexcept {
        return kind == FamilyKind::cauchy || kind == FamilyKind::exponential || kind == FamilyKind::polynomial;
    }
};

/// Default grid for germ families: axis^dim, which contains the corners of
/// the cube spanned by the axis.
std::shared_ptr<const CompactGridD> default_grid(std::size_t dim, const std::vector<double>& axis = {0.0, 0.5, 1.0});

/// Throws InputError when the spec violates the family's preconditions
/// (e.g. a cauchy pole inside or touching the grid's bounding box).
TruncatedElementD generate(const FamilySpec& spec);

/// Settings for random elements used by the verification suites.
struct SampleOptions {
    std::size_t dim = 1;
    std::size_t order_cap = 10;
    PayloadMode mode = PayloadMode::scalar;
    std::shared_ptr<const CompactGridD> grid; // germ mode; defaults to {0,1}^dim
    double zero_probability = 0.1;
};

/// Seed for sample i of a run seeded with base (splitmix64 mixing).
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t i);

/// Random element whose shell-n entries have log magnitude around
/// profile[n] (0 when the profile is empty) minus an exponential offset,
/// with random signs and a fraction of exact zeros. Deterministic in seed.
TruncatedElementD random_element(const SampleOptions& opts, std::uint64_t seed,
                                 const std::vector<double>& profile = {});

/// Random element scaled to |x|_delta = 1 with entries concentrated near
/// the boundary weights delta_n^{-n}. Returns the zero element if the draw
/// is identically zero.
TruncatedElementD random_unit_element(const SampleOptions& opts, std::uint64_t seed, const WeightSequence<double>& delta);

} // namespace germnorm

#endif // GERMNORM_FAMILIES_HPP
