#ifndef GERMNORM_ERRORS_HPP
#define GERMNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace germnorm {

/// Malformed or out-of-domain input (bad values, unparsable data).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Structural mismatch between containers: dimensions, truncation orders,
/// payload lengths, grids, incomplete coefficient tables.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace germnorm

#endif // GERMNORM_ERRORS_HPP
