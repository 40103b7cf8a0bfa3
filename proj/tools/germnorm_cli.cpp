// germnorm: step norms, null-sequence seminorms and the eps -> delta block
// decomposition on truncated coefficient families.
//
// Exit codes: 0 success, 2 malformed input, 3 shape violation,
// 4 a mathematical check failed (weight bound or inclusion).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "germnorm/germnorm.hpp"
#include "germnorm/io.hpp"

namespace {

using namespace germnorm;
using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_shape = 3;
constexpr int exit_falsified = 4;

struct GlobalOptions {
    std::string output;
    std::string format = "json";
    std::uint64_t seed = 0;
};

struct ElementOptions {
    std::string input;
    std::string family;
    std::vector<std::string> params;
    std::vector<std::string> terms;
    std::size_t dim = 1;
    std::optional<std::size_t> order_cap;
    std::string grid_axis = "0,0.5,1";
};

void add_element_options(CLI::App* cmd, ElementOptions& opts) {
    cmd->add_option("--input", opts.input, "Germ JSON file");
    cmd->add_option("--family", opts.family,
                    "cauchy | exponential | polynomial | geometric_scalar | factorial_scalar; "
                    "a single parameter may be given inline, e.g. cauchy(2)");
    cmd->add_option("--params", opts.params, "Family parameters key=v1,v2,...");
    cmd->add_option("--term", opts.terms, "Polynomial term coeff:e1,...,ed (repeatable)");
    cmd->add_option("--dim", opts.dim, "Dimension for families")->check(CLI::PositiveNumber);
    cmd->add_option("--N", opts.order_cap, "Truncation order (families; truncates files)");
    cmd->add_option("--grid-axis", opts.grid_axis, "Axis sample of K for germ families (tensor grid)");
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw InputError(what + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InputError(what + ": empty list");
    }
    return out;
}

std::string default_param_key(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::cauchy: return "a";
    case FamilyKind::polynomial: return "coeffs";
    case FamilyKind::geometric_scalar: return "r";
    default: throw InputError("family " + to_string(kind) + " takes no inline parameter");
    }
}

FamilySpec family_spec(const ElementOptions& opts) {
    FamilySpec spec;
    std::string name = opts.family;
    std::string inline_arg;
    if (auto open = name.find('('); open != std::string::npos) {
        if (name.back() != ')') {
            throw InputError("family: unbalanced parenthesis in '" + name + "'");
        }
        inline_arg = name.substr(open + 1, name.size() - open - 2);
        name = name.substr(0, open);
    }
    spec.kind = parse_family_kind(name);
    spec.dim = opts.dim;
    spec.order_cap = opts.order_cap.value_or(20);
    if (!inline_arg.empty()) {
        spec.params[default_param_key(spec.kind)] = parse_list(inline_arg, "family parameter");
    }
    for (const auto& p : opts.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InputError("--params expects key=value, got '" + p + "'");
        }
        spec.params[p.substr(0, eq)] = parse_list(p.substr(eq + 1), "--params " + p.substr(0, eq));
    }
    if (spec.kind == FamilyKind::polynomial) {
        if (auto it = spec.params.find("coeffs"); it != spec.params.end()) {
            if (spec.dim != 1) {
                throw InputError("polynomial coeffs= is univariate; use --term for dim > 1");
            }
            for (std::size_t m = 0; m < it->second.size(); ++m) {
                spec.monomials.push_back({it->second[m], MultiIndex{static_cast<MultiIndex::value_type>(m)}});
            }
        }
        for (const auto& t : opts.terms) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) {
                throw InputError("--term expects coeff:e1,...,ed, got '" + t + "'");
            }
            const double coeff = parse_list(t.substr(0, colon), "--term coefficient").front();
            std::vector<MultiIndex::value_type> powers;
            for (double e : parse_list(t.substr(colon + 1), "--term exponents")) {
                if (e < 0 || e != static_cast<double>(static_cast<MultiIndex::value_type>(e))) {
                    throw InputError("--term exponents must be nonnegative integers");
                }
                powers.push_back(static_cast<MultiIndex::value_type>(e));
            }
            spec.monomials.push_back({coeff, MultiIndex(std::move(powers))});
        }
    }
    if (spec.is_germ()) {
        spec.grid = default_grid(spec.dim, parse_list(opts.grid_axis, "--grid-axis"));
    }
    return spec;
}

struct LoadedElement {
    TruncatedElementD element;
    std::optional<json> provenance;
};

LoadedElement load_element(const ElementOptions& opts) {
    if (opts.input.empty() == opts.family.empty()) {
        throw InputError("give exactly one of --input or --family");
    }
    if (!opts.input.empty()) {
        auto e = io::load_germ(opts.input);
        if (opts.order_cap) {
            e = truncate(e, *opts.order_cap);
        }
        return {std::move(e), std::nullopt};
    }
    const FamilySpec spec = family_spec(opts);
    return {generate(spec), io::family_to_json(spec)};
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + g.output);
    }
    out << text;
}

void emit_json(const GlobalOptions& g, const json& j) {
    emit(g, j.dump(2) + "\n");
}

EpsSequence<double> eps_for(const std::string& text, std::size_t order_cap) {
    auto eps = parse_eps(text, order_cap + 1);
    if (eps.clamped_count() > 0) {
        std::cerr << "note: " << eps.clamped_count() << " eps entries above 1 clamped to 1\n";
    }
    return eps;
}

void attach_growth_flags(NormReport<double>& report, const TruncatedElementD& e, int k, int k_max) {
    if (e.order_cap() == 0) {
        return;
    }
    const auto growth = classify_growth(e, std::min<std::size_t>(5, e.order_cap()), std::max(k, k_max));
    report.heuristic_finite = growth.finite_guess;
    report.finite_guess = growth.finite_guess.at(k);
}

int run_norm(const GlobalOptions& g, const ElementOptions& eo, int k, int k_max) {
    auto [e, provenance] = load_element(eo);
    auto report = norm_k(e, k);
    attach_growth_flags(report, e, k, k_max);
    json out = io::report_to_json(report);
    out["k"] = k;
    out["order_cap"] = e.order_cap();
    if (provenance) {
        out["family"] = *provenance;
    }
    emit_json(g, out);
    return exit_ok;
}

WeightSequence<double> weights_from(const std::string& eps_text, const std::string& delta_text, std::size_t order_cap,
                                    std::size_t margin) {
    if (eps_text.empty() == delta_text.empty()) {
        throw InputError("give exactly one of --eps or --delta");
    }
    if (!eps_text.empty()) {
        return build_delta(eps_for(eps_text, order_cap), std::max<std::size_t>(order_cap, 1), margin).deltas;
    }
    auto values = parse_list(delta_text, "--delta");
    values.insert(values.begin(), 1.0); // delta_0, never used as a weight
    return WeightSequence<double>::from_values(std::move(values));
}

int run_seminorm(const GlobalOptions& g, const ElementOptions& eo, const std::string& eps_text,
                 const std::string& delta_text, std::size_t margin, std::optional<int> k) {
    auto [e, provenance] = load_element(eo);
    const auto delta = weights_from(eps_text, delta_text, e.order_cap(), margin);
    json out = io::report_to_json(seminorm_delta(e, delta));
    out["order_cap"] = e.order_cap();
    if (k) {
        const auto c = continuity_constant(delta, *k, e.order_cap());
        out["continuity_constant"] = io::log_magnitude_to_json(c);
        out["continuity_k"] = *k;
        out["norm_k"] = io::report_to_json(norm_k(e, *k));
    }
    if (provenance) {
        out["family"] = *provenance;
    }
    emit_json(g, out);
    return exit_ok;
}

int run_delta(const GlobalOptions& g, const std::string& eps_text, std::size_t order_cap, std::size_t margin) {
    const auto ds = build_delta(eps_for(eps_text, order_cap), order_cap, margin);
    const auto bound = verify_weight_bound(ds, order_cap);
    if (g.format == "csv") {
        emit(g, io::delta_to_csv(ds, bound));
    } else {
        emit_json(g, io::delta_to_json(ds, bound));
    }
    return bound.pass ? exit_ok : exit_falsified;
}

struct VerifyOptions {
    std::string eps;
    std::size_t samples = 100;
    std::size_t dim = 1;
    std::size_t order_cap = 10;
    std::string mode = "scalar";
    std::string element = "random";
    std::size_t margin = 0;
    std::string grid_axis = "0,1";
};

int run_verify(const GlobalOptions& g, const VerifyOptions& vo) {
    if (vo.samples == 0) {
        throw InputError("--samples must be at least 1");
    }
    if (vo.order_cap == 0) {
        throw InputError("--N must be at least 1");
    }
    const auto ds = build_delta(eps_for(vo.eps, vo.order_cap), vo.order_cap, vo.margin);
    SampleOptions so;
    so.dim = vo.dim;
    so.order_cap = vo.order_cap;
    so.mode = vo.mode == "germ" ? PayloadMode::germ : PayloadMode::scalar;
    if (so.mode == PayloadMode::germ) {
        so.grid = default_grid(vo.dim, parse_list(vo.grid_axis, "--grid-axis"));
    }

    std::size_t passed = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> worst_sample;
    json failures = json::array();
    std::size_t separate_zero_shell = 0;
    for (std::size_t i = 0; i < vo.samples; ++i) {
        const std::uint64_t seed = sample_seed(g.seed, i);
        TruncatedElementD x = [&] {
            if (vo.element == "zero") {
                return so.mode == PayloadMode::germ ? TruncatedElementD::zero_germ(so.grid, vo.order_cap)
                                                    : TruncatedElementD::zero_scalar(vo.dim, vo.order_cap);
            }
            if (vo.element == "boundary") {
                return boundary_element(ds, vo.dim, vo.order_cap);
            }
            return random_unit_element(so, seed, ds.deltas);
        }();
        const auto cert = verify_inclusion(x, ds);
        if (cert.zero_shell == ZeroShellConvention::separate_block) {
            ++separate_zero_shell;
        }
        if (cert.worst_margin < worst || !worst_sample) {
            worst = cert.worst_margin;
            worst_sample = i;
        }
        if (cert.pass) {
            ++passed;
        } else {
            failures.push_back({{"sample", i}, {"seed", seed}, {"worst_margin", cert.worst_margin}});
        }
    }
    json out = {{"eps", vo.eps},
                {"dim", vo.dim},
                {"order_cap", vo.order_cap},
                {"mode", vo.mode},
                {"element", vo.element},
                {"seed", g.seed},
                {"samples", vo.samples},
                {"passed", passed},
                {"failed", vo.samples - passed},
                {"jumps", ds.jumps},
                {"zero_shell_separate_blocks", separate_zero_shell},
                {"worst_margin", std::isfinite(worst) ? json(worst) : json(nullptr)},
                {"worst_sample", *worst_sample},
                {"failures", std::move(failures)}};
    emit_json(g, out);
    return passed == vo.samples ? exit_ok : exit_falsified;
}

int run_decompose(const GlobalOptions& g, const ElementOptions& eo, const std::string& eps_text, std::size_t margin,
                  bool emit_blocks) {
    auto [e, provenance] = load_element(eo);
    const auto ds = build_delta(eps_for(eps_text, e.order_cap()), std::max<std::size_t>(e.order_cap(), 1), margin);
    const auto bd = decompose(e, ds);
    const bool exact = reconstruct(bd) == e;
    json out = io::decomposition_to_json(bd, exact);
    out["seminorm"] = io::log_magnitude_to_json(seminorm_delta(e, ds.deltas).value);
    out["jumps"] = ds.jumps;
    if (emit_blocks) {
        for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
            out["blocks"][i]["element"] = io::germ_to_json(bd.blocks[i].xi);
        }
    }
    if (provenance) {
        out["family"] = *provenance;
    }
    emit_json(g, out);
    return exit_ok;
}

int run_growth(const GlobalOptions& g, const ElementOptions& eo, std::size_t window, int k_max,
               const std::string& plot_data) {
    auto [e, provenance] = load_element(eo);
    const auto growth = classify_growth(e, window, k_max);
    if (!plot_data.empty()) {
        std::ofstream csv(plot_data, std::ios::binary);
        if (!csv) {
            throw InputError("cannot write " + plot_data);
        }
        csv << io::growth_to_csv(growth);
    }
    if (g.format == "csv") {
        emit(g, io::growth_to_csv(growth));
        return exit_ok;
    }
    json out = io::growth_to_json(growth);
    if (provenance) {
        out["family"] = *provenance;
    }
    emit_json(g, out);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Step norms, null-sequence seminorms and block decompositions of truncated coefficient families"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--output", global.output, "Write the report to this file instead of stdout");
    app.add_option("--format", global.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", global.seed, "Seed for randomized runs");

    ElementOptions element;
    int k = 1;
    int k_max = 20;
    std::string eps_text;
    std::string delta_text;
    std::size_t margin = 0;
    std::optional<int> continuity_k;
    std::size_t order_cap = 10;
    std::size_t window = 5;
    std::string plot_data;
    bool emit_blocks = false;
    VerifyOptions verify;

    auto* norm = app.add_subcommand("norm", "Step norm ||x||_k");
    add_element_options(norm, element);
    norm->add_option("--k", k, "Step index k >= 1")->check(CLI::PositiveNumber);
    norm->add_option("--kmax", k_max, "Largest k in the heuristic finiteness map")->check(CLI::PositiveNumber);

    auto* seminorm = app.add_subcommand("seminorm", "Seminorm |x|_delta");
    add_element_options(seminorm, element);
    seminorm->add_option("--eps", eps_text, "Build delta from eps (list or 1, 1/k, 1/k^2, 2^-k, 10^-k)");
    seminorm->add_option("--delta", delta_text, "Explicit weights delta_1,...,delta_N");
    seminorm->add_option("--margin", margin, "Extra offset on n_k, k >= 2");
    seminorm->add_option("--k", continuity_k, "Also report the continuity constant against ||.||_k")
        ->check(CLI::PositiveNumber);

    auto* delta = app.add_subcommand("delta", "Jump sequence and weights delta_n built from eps");
    delta->add_option("--eps", eps_text, "eps list or closed form")->required();
    delta->add_option("--N", order_cap, "Truncation order")->check(CLI::PositiveNumber);
    delta->add_option("--margin", margin, "Extra offset on n_k, k >= 2");

    auto* verify_cmd = app.add_subcommand("verify", "Check the block inclusion on seeded random unit elements");
    verify_cmd->add_option("--eps", verify.eps, "eps list or closed form")->required();
    verify_cmd->add_option("--samples", verify.samples, "Number of elements");
    verify_cmd->add_option("--dim", verify.dim, "Dimension")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--N", verify.order_cap, "Truncation order");
    verify_cmd->add_option("--mode", verify.mode, "scalar | germ")->check(CLI::IsMember({"scalar", "germ"}));
    verify_cmd->add_option("--element", verify.element, "random | zero | boundary")
        ->check(CLI::IsMember({"random", "zero", "boundary"}));
    verify_cmd->add_option("--margin", verify.margin, "Extra offset on n_k, k >= 2");
    verify_cmd->add_option("--grid-axis", verify.grid_axis, "Axis sample of K in germ mode");

    auto* decompose_cmd = app.add_subcommand("decompose", "Block decomposition x = sum_k xi_k");
    add_element_options(decompose_cmd, element);
    decompose_cmd->add_option("--eps", eps_text, "eps list or closed form")->required();
    decompose_cmd->add_option("--margin", margin, "Extra offset on n_k, k >= 2");
    decompose_cmd->add_flag("--emit-blocks", emit_blocks, "Include each block's coefficients");

    auto* growth = app.add_subcommand("growth", "Per-order coefficient growth rates (heuristic)");
    add_element_options(growth, element);
    growth->add_option("--window", window, "Number of trailing shells used for the estimate")
        ->check(CLI::PositiveNumber);
    growth->add_option("--kmax", k_max, "Largest k in the heuristic finiteness map")->check(CLI::PositiveNumber);
    growth->add_option("--plot-data", plot_data, "Also write the n,s_n CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*norm) {
            return run_norm(global, element, k, k_max);
        }
        if (*seminorm) {
            return run_seminorm(global, element, eps_text, delta_text, margin, continuity_k);
        }
        if (*delta) {
            return run_delta(global, eps_text, order_cap, margin);
        }
        if (*verify_cmd) {
            return run_verify(global, verify);
        }
        if (*decompose_cmd) {
            return run_decompose(global, element, eps_text, margin, emit_blocks);
        }
        return run_growth(global, element, window, k_max, plot_data);
    } catch (const ShapeError& e) {
        std::cerr << "shape error: " << e.what() << '\n';
        return exit_shape;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::out_of_range& e) {
        std::cerr << "shape error: " << e.what() << '\n';
        return exit_shape;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
}
