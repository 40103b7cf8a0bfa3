#ifndef GERMNORM_IO_HPP
#define GERMNORM_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "germnorm/families.hpp"
#include "germnorm/germspace.hpp"
#include "germnorm/lemma.hpp"
#include "germnorm/norms.hpp"

namespace germnorm::io {

using json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_double(double v);

json to_json(const MultiIndex& alpha);
MultiIndex multiindex_from_json(const json& j);

/// Germ file:
///   { "dim": d, "order_cap": N, "mode": "germ"|"scalar",
///     "grid": [[x...]...],               (germ mode only)
///     "coeffs": [ {"alpha": [...], "values": [...]}, ... ],
///     "family": {...} }                  (optional provenance, ignored on read)
/// Coefficients may come in any order but must cover every |alpha| <= N
/// exactly once. Structural violations throw ShapeError, malformed
/// documents InputError.
TruncatedElementD germ_from_json(const json& j);
json germ_to_json(const TruncatedElementD& e, const std::optional<json>& family = std::nullopt);

TruncatedElementD load_germ(const std::filesystem::path& path);
json family_to_json(const FamilySpec& spec);

/// { "log_value": x|null, "magnitude": x|null, "argmax_alpha": [...],
///   "argmax_point": i|null, "heuristic_finite": {"k": bool, ...} }
/// log_value is null for the zero magnitude, magnitude is 0 then and null
/// when exp(log_value) overflows.
json report_to_json(const NormReport<double>& r);
json log_magnitude_to_json(const LogMagnitude<double>& m);

json growth_to_json(const GrowthReport<double>& g);
/// Columns n,s_n (s_n empty for all-zero shells).
std::string growth_to_csv(const GrowthReport<double>& g);

json delta_to_json(const DeltaSystem<double>& ds, const WeightBoundReport<double>& bound);
/// Columns n,k,delta_n,log_delta_n,weight_bound_margin for 1 <= n <= N.
std::string delta_to_csv(const DeltaSystem<double>& ds, const WeightBoundReport<double>& bound);

json certificate_to_json(const InclusionCertificate<double>& c);
json decomposition_to_json(const BlockDecomposition<double>& bd, bool reconstruction_exact);

std::string to_string(ZeroShellConvention c);

} // namespace germnorm::io

#endif // GERMNORM_IO_HPP
