#ifndef GERMNORM_EPS_EXPR_HPP
#define GERMNORM_EPS_EXPR_HPP

#include <cstddef>
#include <string>

#include "germnorm/lemma.hpp"

namespace germnorm {

/// Parses an eps description.
///
/// Accepted forms: the closed forms "1", "1/k", "1/k^2", "2^-k", "10^-k"
/// (expanded to count entries, in exact log form), or a comma separated
/// list of positive numbers. Entries above 1 are clamped; see
/// EpsSequence::clamped_count. Throws InputError on anything else.
EpsSequence<double> parse_eps(const std::string& text, std::size_t count);

} // namespace germnorm

#endif // GERMNORM_EPS_EXPR_HPP
