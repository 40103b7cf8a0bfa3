#include "germnorm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "germnorm/errors.hpp"

namespace germnorm::io {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::size_t read_count(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw InputError(std::string("germ file: missing \"") + key + "\"");
    }
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InputError(std::string("germ file: \"") + key + "\" must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

double read_real(const json& v, const char* what) {
    if (!v.is_number()) {
        throw InputError(std::string("germ file: ") + what + " must be numeric");
    }
    return v.get<double>();
}

} // namespace

json to_json(const MultiIndex& alpha) {
    json out = json::array();
    for (auto a : alpha.entries()) {
        out.push_back(a);
    }
    return out;
}

MultiIndex multiindex_from_json(const json& j) {
    if (!j.is_array()) {
        throw InputError("multi-index must be an array of nonnegative integers");
    }
    std::vector<MultiIndex::value_type> entries;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw InputError("multi-index must be an array of nonnegative integers");
        }
        entries.push_back(v.get<MultiIndex::value_type>());
    }
    return MultiIndex(std::move(entries));
}

TruncatedElementD germ_from_json(const json& j) {
    if (!j.is_object()) {
        throw InputError("germ file: top level must be an object");
    }
    const std::size_t dim = read_count(j, "dim");
    const std::size_t order_cap = read_count(j, "order_cap");
    if (dim == 0) {
        throw InputError("germ file: \"dim\" must be positive");
    }
    if (!j.contains("mode") || !j.at("mode").is_string()) {
        throw InputError("germ file: missing \"mode\"");
    }
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "germ" && mode != "scalar") {
        throw InputError("germ file: mode must be \"germ\" or \"scalar\"");
    }

    std::shared_ptr<const CompactGridD> grid;
    if (mode == "germ") {
        if (!j.contains("grid") || !j.at("grid").is_array() || j.at("grid").empty()) {
            throw InputError("germ file: germ mode requires a nonempty \"grid\"");
        }
        const json& g = j.at("grid");
        CompactGridD::Points pts(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!g[i].is_array()) {
                throw InputError("germ file: grid points must be arrays");
            }
            if (g[i].size() != dim) {
                throw ShapeError("germ file: grid point " + std::to_string(i) + " has " + std::to_string(g[i].size()) +
                                 " coordinates, expected " + std::to_string(dim));
            }
            for (std::size_t c = 0; c < dim; ++c) {
                pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = read_real(g[i][c], "grid coordinates");
            }
        }
        grid = std::make_shared<const CompactGridD>(std::move(pts), "file");
    } else if (j.contains("grid")) {
        throw InputError("germ file: scalar mode must not carry a grid");
    }

    if (!j.contains("coeffs") || !j.at("coeffs").is_array()) {
        throw InputError("germ file: missing \"coeffs\" array");
    }
    auto table = std::make_shared<const IndexTable>(dim, order_cap);
    const Eigen::Index width = grid ? static_cast<Eigen::Index>(grid->size()) : 1;
    TruncatedElementD::Coefficients c = TruncatedElementD::Coefficients::Zero(static_cast<Eigen::Index>(table->size()), width);
    std::vector<bool> seen(table->size(), false);
    for (const auto& entry : j.at("coeffs")) {
        if (!entry.is_object() || !entry.contains("alpha") || !entry.contains("values") || !entry.at("values").is_array()) {
            throw InputError("germ file: coefficient entries need \"alpha\" and \"values\"");
        }
        const MultiIndex alpha = multiindex_from_json(entry.at("alpha"));
        if (alpha.dim() != dim) {
            throw ShapeError("germ file: alpha of dimension " + std::to_string(alpha.dim()) + ", expected " +
                             std::to_string(dim));
        }
        if (alpha.order() > order_cap) {
            throw ShapeError("germ file: |alpha| = " + std::to_string(alpha.order()) + " exceeds order_cap");
        }
        const std::size_t row = table->row_of(alpha);
        if (seen[row]) {
            throw ShapeError("germ file: duplicate coefficient for alpha " + to_json(alpha).dump());
        }
        seen[row] = true;
        const json& values = entry.at("values");
        if (static_cast<Eigen::Index>(values.size()) != width) {
            throw ShapeError("germ file: payload of length " + std::to_string(values.size()) + ", expected " +
                             std::to_string(width));
        }
        for (Eigen::Index p = 0; p < width; ++p) {
            c(static_cast<Eigen::Index>(row), p) = read_real(values[static_cast<std::size_t>(p)], "values");
        }
    }
    const auto missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
    if (missing > 0) {
        throw ShapeError("germ file: " + std::to_string(missing) + " of " + std::to_string(table->size()) +
                         " coefficients missing");
    }
    return TruncatedElementD(std::move(table), std::move(c), std::move(grid));
}

json germ_to_json(const TruncatedElementD& e, const std::optional<json>& family) {
    json out;
    out["dim"] = e.dim();
    out["order_cap"] = e.order_cap();
    out["mode"] = e.mode() == PayloadMode::germ ? "germ" : "scalar";
    if (e.grid()) {
        json grid = json::array();
        for (std::size_t i = 0; i < e.grid()->size(); ++i) {
            json pt = json::array();
            for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(e.dim()); ++c) {
                pt.push_back(e.grid()->point(i)(c));
            }
            grid.push_back(std::move(pt));
        }
        out["grid"] = std::move(grid);
    }
    json coeffs = json::array();
    for (std::size_t row = 0; row < e.indices().size(); ++row) {
        json values = json::array();
        for (Eigen::Index p = 0; p < e.coeffs().cols(); ++p) {
            values.push_back(e.coeffs()(static_cast<Eigen::Index>(row), p));
        }
        coeffs.push_back({{"alpha", to_json(e.indices()[row])}, {"values", std::move(values)}});
    }
    out["coeffs"] = std::move(coeffs);
    if (family) {
        out["family"] = *family;
    }
    return out;
}

TruncatedElementD load_germ(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open germ file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw InputError("germ file " + path.string() + ": " + ex.what());
    }
    return germ_from_json(j);
}

json family_to_json(const FamilySpec& spec) {
    json params = json::object();
    for (const auto& [key, values] : spec.params) {
        params[key] = values;
    }
    json out = {{"kind", to_string(spec.kind)}, {"dim", spec.dim}, {"order_cap", spec.order_cap}, {"params", params}};
    if (!spec.monomials.empty()) {
        json terms = json::array();
        for (const auto& m : spec.monomials) {
            terms.push_back({{"coeff", m.coeff}, {"powers", to_json(m.powers)}});
        }
        out["terms"] = std::move(terms);
    }
    return out;
}

json log_magnitude_to_json(const LogMagnitude<double>& m) {
    if (m.is_zero()) {
        return {{"log_value", nullptr}, {"magnitude", 0.0}};
    }
    return {{"log_value", m.log_value}, {"magnitude", number_or_null(m.magnitude())}};
}

json report_to_json(const NormReport<double>& r) {
    json out = log_magnitude_to_json(r.value);
    out["argmax_alpha"] = to_json(r.argmax_alpha);
    out["argmax_point"] = r.argmax_point ? json(*r.argmax_point) : json(nullptr);
    json flags = json::object();
    for (const auto& [k, finite] : r.heuristic_finite) {
        flags[std::to_string(k)] = finite;
    }
    out["heuristic_finite"] = std::move(flags);
    return out;
}

json growth_to_json(const GrowthReport<double>& g) {
    json rates = json::array();
    for (const auto& r : g.rates) {
        rates.push_back({{"n", r.n}, {"s_n", number_or_null(r.root_rate)}});
    }
    json flags = json::object();
    for (const auto& [k, finite] : g.finite_guess) {
        flags[std::to_string(k)] = finite;
    }
    return {{"estimate", number_or_null(g.estimate)},
            {"estimate_is_neg_infinity", std::isinf(g.estimate) && g.estimate < 0},
            {"window", g.window},
            {"heuristic", true},
            {"heuristic_finite", std::move(flags)},
            {"rates", std::move(rates)}};
}

std::string growth_to_csv(const GrowthReport<double>& g) {
    std::ostringstream out;
    out << "n,s_n\n";
    for (const auto& r : g.rates) {
        out << r.n << ',' << (std::isfinite(r.root_rate) ? format_double(r.root_rate) : std::string()) << '\n';
    }
    return out.str();
}

json delta_to_json(const DeltaSystem<double>& ds, const WeightBoundReport<double>& bound) {
    json jumps = json::array();
    for (auto n : ds.jumps) {
        jumps.push_back(n);
    }
    json eps = json::array();
    for (std::size_t k = 1; k <= ds.segments(); ++k) {
        eps.push_back({{"k", k}, {"eps", ds.eps.value(k)}, {"log_eps", ds.eps.log_value(k)}});
    }
    json rows = json::array();
    for (const auto& c : bound.checks) {
        rows.push_back({{"n", c.n},
                        {"k", c.k},
                        {"delta_n", ds.deltas.value(c.n)},
                        {"log_delta_n", ds.deltas.log_value(c.n)},
                        {"weight_bound_margin", c.margin}});
    }
    return {{"order_cap", ds.order_cap},
            {"margin", ds.margin},
            {"jumps", std::move(jumps)},
            {"eps", std::move(eps)},
            {"eps_clamped", ds.eps.clamped_count()},
            {"rows", std::move(rows)},
            {"weight_bound_pass", bound.pass},
            {"worst_margin", number_or_null(bound.worst_margin)}};
}

std::string delta_to_csv(const DeltaSystem<double>& ds, const WeightBoundReport<double>& bound) {
    std::ostringstream out;
    out << "n,k,delta_n,log_delta_n,weight_bound_margin\n";
    for (const auto& c : bound.checks) {
        out << c.n << ',' << c.k << ',' << format_double(ds.deltas.value(c.n)) << ','
            << format_double(ds.deltas.log_value(c.n)) << ',' << format_double(c.margin) << '\n';
    }
    return out.str();
}

std::string to_string(ZeroShellConvention c) {
    return c == ZeroShellConvention::absorbed ? "absorbed_into_block_1" : "separate_block_0";
}

json certificate_to_json(const InclusionCertificate<double>& c) {
    json blocks = json::array();
    for (const auto& b : c.blocks) {
        json entry = {{"k", b.k}, {"lo", b.lo}, {"hi", b.hi}, {"log_bound", b.log_bound}};
        entry["certified_norm"] = log_magnitude_to_json(b.certified_norm);
        entry["margin"] = number_or_null(b.margin);
        blocks.push_back(std::move(entry));
    }
    return {{"seminorm", log_magnitude_to_json(c.seminorm)},
            {"rescaled", c.rescaled},
            {"zero_shell", to_string(c.zero_shell)},
            {"blocks", std::move(blocks)},
            {"worst_margin", number_or_null(c.worst_margin)},
            {"pass", c.pass}};
}

json decomposition_to_json(const BlockDecomposition<double>& bd, bool reconstruction_exact) {
    json blocks = json::array();
    for (const auto& b : bd.blocks) {
        json entry = {{"k", b.k}, {"lo", b.lo}, {"hi", b.hi}, {"log_bound", b.log_bound}};
        entry["certified_norm"] = log_magnitude_to_json(b.certified_norm);
        entry["within_bound"] = b.certified_norm.is_zero() ||
                                b.certified_norm.log_value <= b.log_bound + inclusion_tolerance;
        blocks.push_back(std::move(entry));
    }
    return {{"zero_shell", to_string(bd.zero_shell)},
            {"blocks", std::move(blocks)},
            {"reconstruction_exact", reconstruction_exact}};
}

} // namespace germnorm::io
