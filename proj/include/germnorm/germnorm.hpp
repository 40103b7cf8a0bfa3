#ifndef GERMNORM_GERMNORM_HPP
#define GERMNORM_GERMNORM_HPP

#include "germnorm/eps_expr.hpp"
#include "germnorm/errors.hpp"
#include "germnorm/families.hpp"
#include "germnorm/germspace.hpp"
#include "germnorm/lemma.hpp"
#include "germnorm/log_magnitude.hpp"
#include "germnorm/multiindex.hpp"
#include "germnorm/norms.hpp"

#endif // GERMNORM_GERMNORM_HPP
