// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "germnorm/germnorm.hpp"
#include "oracles.hpp"

using namespace germnorm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct EpsCase {
    const char* name;
    std::function<double(double)> f;
};

const std::vector<EpsCase> eps_matrix = {
    {"1", [](double) { return 1.0; }},
    {"1/k^2", [](double k) { return 1.0 / (k * k); }},
    {"2^-k", [](double k) { return std::pow(2.0, -k); }},
    {"10^-k", [](double k) { return std::pow(10.0, -k); }},
};

EpsSequence<double> eps_of(const EpsCase& c, std::size_t count) {
    std::vector<double> v;
    for (std::size_t k = 1; k <= count; ++k) {
        v.push_back(c.f(static_cast<double>(k)));
    }
    return EpsSequence<double>::from_values(v);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_log_delta(std::mt19937_64& rng, std::size_t order_cap) {
    std::vector<double> logs(order_cap + 1, 0.0);
    for (std::size_t n = 1; n <= order_cap; ++n) {
        logs[n] = -3.0 + 4.0 * uniform(rng);
    }
    return logs;
}

// element whose shell magnitudes follow a random geometric rate in [-2, 3]
TruncatedElementD random_spread(std::uint64_t i, std::size_t max_order) {
    SampleOptions opts;
    opts.dim = 1 + i % 3;
    opts.order_cap = i % (max_order + 1);
    opts.mode = (i / 3) % 2 ? PayloadMode::germ : PayloadMode::scalar;
    std::mt19937_64 rng(i);
    const double rate = -2.0 + 5.0 * uniform(rng);
    std::vector<double> profile(opts.order_cap + 1);
    for (std::size_t n = 0; n <= opts.order_cap; ++n) {
        profile[n] = rate * static_cast<double>(n);
    }
    return random_element(opts, sample_seed(i, 77), profile);
}

Outcome inclusion_suite() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    double worst = std::numeric_limits<double>::infinity();
    std::size_t runs = 0;
    std::size_t failures = 0;
    for (const auto& eps : eps_matrix) {
        for (std::size_t d : {1u, 2u, 3u}) {
            for (std::size_t N : {10u, 20u, 40u}) {
                const auto ds = build_delta(eps_of(eps, N + 1), N);
                SampleOptions opts;
                opts.dim = d;
                opts.order_cap = N;
                for (std::uint64_t i = 0; i < 1000; ++i) {
                    const auto x = random_unit_element(opts, sample_seed(1000 * d + N, i), ds.deltas);
                    const auto cert = verify_inclusion(x, ds);
                    worst = std::min(worst, cert.worst_margin);
                    ++runs;
                    if (!cert.pass) {
                        ++failures;
                        if (o.pass) {
                            o.detail = std::string("first failure eps=") + eps.name + " d=" + std::to_string(d) +
                                       " N=" + std::to_string(N) + " sample " + std::to_string(i) + "; ";
                        }
                        o.pass = false;
                    }
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) {
        o.pass = false;
    }
    o.detail += std::to_string(runs) + " elements, " + std::to_string(failures) + " failures, worst margin " +
                fmt(worst) + ", " + fmt(secs) + " s";
    return o;
}

Outcome weight_bound_identity() {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    double worst_at_jump = 0.0;
    for (const auto& eps : eps_matrix) {
        const std::size_t N = 40;
        const auto ds = build_delta(eps_of(eps, N + 1), N);
        const auto report = verify_weight_bound(ds, N);
        worst = std::min(worst, report.worst_margin);
        for (const auto& c : report.checks) {
            if (c.margin < -1e-9) {
                o.pass = false;
            }
            if (c.n == ds.jumps[c.k - 1]) {
                worst_at_jump = std::max(worst_at_jump, std::abs(c.margin));
            }
        }
        if (report.checks.size() != N) {
            o.pass = false;
        }
    }
    if (worst_at_jump > 1e-12) {
        o.pass = false;
    }
    o.detail = "worst margin " + fmt(worst) + ", max |margin| at jumps " + fmt(worst_at_jump);
    return o;
}

Outcome worked_delta_table() {
    Outcome o;
    // brute-force jumps first, independent of the library
    std::vector<std::size_t> scanned{1};
    for (std::size_t k = 2;; ++k) {
        const auto n = oracle::scan_jump(std::pow(2.0, -static_cast<double>(k)), k, scanned.back(), 100);
        if (n == 0) {
            break;
        }
        scanned.push_back(n);
    }
    const std::size_t N = scanned.back();
    const auto ds = build_delta(parse_eps("2^-k", N + 1), N);
    if (ds.jumps != scanned) {
        o.pass = false;
    }
    const std::vector<std::size_t> expected_jumps{1, 3, 6};
    const std::vector<double> expected_delta{2.0, 0.79370, 0.47140};
    for (std::size_t k = 1; k <= 3; ++k) {
        if (ds.jumps[k - 1] != expected_jumps[k - 1]) {
            o.pass = false;
        }
        const double got = ds.deltas.value(ds.jumps[k - 1]);
        const double oracle_delta = 1.0 / (std::pow(std::pow(2.0, -static_cast<double>(k)),
                                                    1.0 / static_cast<double>(scanned[k - 1])) *
                                           static_cast<double>(k));
        if (std::abs(got - expected_delta[k - 1]) > 1e-5 || std::abs(got - oracle_delta) > 1e-12) {
            o.pass = false;
        }
    }
    std::ostringstream os;
    os << "jumps up to 100:";
    for (auto n : scanned) {
        os << ' ' << n;
    }
    os.precision(6);
    os << "; delta " << ds.deltas.value(1) << ", " << ds.deltas.value(3) << ", " << ds.deltas.value(6);
    o.detail = os.str();
    return o;
}

Outcome eps_one_closed_form() {
    Outcome o;
    const std::size_t N = 40;
    const auto ds = build_delta(EpsSequence<double>::from_values({1.0}), N);
    double worst = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double expected = 1.0 / static_cast<double>(n);
        worst = std::max(worst, std::abs(ds.deltas.value(n) - expected) / expected);
    }
    o.pass = worst <= 1e-12;
    o.detail = "max relative error " + fmt(worst);
    return o;
}

Outcome closed_form_norms() {
    Outcome o;
    double worst_cauchy = 0.0;
    for (std::size_t N : {10u, 20u, 40u}) {
        FamilySpec spec;
        spec.kind = FamilyKind::cauchy;
        spec.order_cap = N;
        spec.params["a"] = {2.0};
        const auto e = generate(spec);
        for (int k = 1; k <= 6; ++k) {
            worst_cauchy = std::max(worst_cauchy, std::abs(norm_k(e, k).value.magnitude() - 1.0));
        }
    }
    double worst_boundary = 0.0;
    for (const auto& eps : eps_matrix) {
        for (std::size_t N : {10u, 20u, 40u}) {
            const auto ds = build_delta(eps_of(eps, N + 1), N);
            const auto x = boundary_element(ds, 1, N);
            worst_boundary = std::max(worst_boundary, std::abs(seminorm_delta(x, ds.deltas).value.magnitude() - 1.0));
        }
    }
    o.pass = worst_cauchy <= 1e-9 && worst_boundary <= 1e-12;
    o.detail = "cauchy max |norm - 1| " + fmt(worst_cauchy) + ", boundary max ||x| - 1| " + fmt(worst_boundary);
    return o;
}

Outcome continuity_bound() {
    Outcome o;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (int k = 1; k <= 6; ++k) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(k));
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const auto e = random_spread(sample_seed(k, i), 14);
            // alternate between arbitrary weights and lemma weights
            const auto delta = i % 2 ? WeightSequence<double>::from_log_values(random_log_delta(rng, e.order_cap()))
                                     : build_delta(eps_of(eps_matrix[i / 2 % 4], e.order_cap() + 2),
                                                   std::max<std::size_t>(e.order_cap(), 1))
                                           .deltas;
            const auto s = seminorm_delta(e, delta).value;
            if (s.is_zero()) {
                continue;
            }
            const double margin = continuity_constant(delta, k, e.order_cap()).log_value + norm_k(e, k).value.log_value -
                                  s.log_value;
            worst = std::min(worst, margin);
            if (margin < -1e-12) {
                ++violations;
            }
        }
    }
    o.pass = violations == 0;
    o.detail = "6000 elements, " + std::to_string(violations) + " violations, worst log margin " + fmt(worst);
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    double worst = 0.0;
    std::mt19937_64 rng(2024);
    for (std::uint64_t i = 0; i < 200; ++i) {
        SampleOptions opts;
        opts.dim = 1 + i % 2;
        opts.order_cap = i % 7;
        opts.mode = (i / 2) % 2 ? PayloadMode::germ : PayloadMode::scalar;
        const auto e = random_element(opts, sample_seed(31, i));
        for (int k = 1; k <= 6; ++k) {
            const double direct = oracle::naive_norm_k(e, k);
            const double logd = norm_k(e, k).value.magnitude();
            worst = std::max(worst, direct == 0.0 ? logd : std::abs(logd - direct) / direct);
        }
        const auto logs = random_log_delta(rng, opts.order_cap);
        std::vector<double> plain(logs.size());
        for (std::size_t n = 0; n < logs.size(); ++n) {
            plain[n] = std::exp(logs[n]);
        }
        const double direct = oracle::naive_seminorm(e, plain);
        const double logd = seminorm_delta(e, WeightSequence<double>::from_values(plain)).value.magnitude();
        worst = std::max(worst, direct == 0.0 ? logd : std::abs(logd - direct) / direct);
    }
    o.pass = worst <= 1e-9;
    o.detail = "200 elements, max relative deviation " + fmt(worst);
    return o;
}

Outcome monotonicity() {
    Outcome o;
    std::size_t k_violations = 0;
    std::size_t delta_violations = 0;
    std::mt19937_64 rng(8);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto e = random_spread(sample_seed(8, i), 14);
        const int k = 1 + static_cast<int>(rng() % 10);
        const int k2 = k + 1 + static_cast<int>(rng() % 5);
        if (norm_k(e, k).value < norm_k(e, k2).value) {
            ++k_violations;
        }
    }
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto e = random_spread(sample_seed(9, i), 14);
        auto lo = random_log_delta(rng, e.order_cap());
        auto hi = lo;
        for (std::size_t n = 1; n < hi.size(); ++n) {
            hi[n] += rng() % 3 == 0 ? 0.0 : uniform(rng);
        }
        const auto a = seminorm_delta(e, WeightSequence<double>::from_log_values(lo)).value;
        const auto b = seminorm_delta(e, WeightSequence<double>::from_log_values(hi)).value;
        if (b < a) {
            ++delta_violations;
        }
    }
    o.pass = k_violations == 0 && delta_violations == 0;
    o.detail = "norm_k in k: " + std::to_string(k_violations) + " violations, seminorm in delta: " +
               std::to_string(delta_violations) + " violations";
    return o;
}

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string(GERMNORM_CLI) + " " + args + " 2>&1";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, out};
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, got);
    }
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

Outcome cli_determinism() {
    Outcome o;
    const std::vector<std::string> invocations = {
        "--seed 7 verify --eps 1/k^2 --samples 200 --dim 2 --N 20 --mode germ",
        "--seed 7 verify --eps 10^-k --samples 200 --dim 3 --N 10",
        "delta --eps 2^-k --N 40 --format csv",
        "delta --eps 1/k --N 40",
        "norm --family 'cauchy(2)' --N 20 --k 3",
        "seminorm --family 'exponential' --dim 2 --N 12 --eps 1/k^2 --k 2",
        "decompose --family 'cauchy(1.5)' --N 20 --eps 2^-k --emit-blocks",
        "growth --family factorial_scalar --N 30 --format csv",
    };
    std::size_t mismatches = 0;
    for (const auto& args : invocations) {
        const auto a = run_cli(args);
        const auto b = run_cli(args);
        if (a.first != 0 || a != b || a.second.empty()) {
            ++mismatches;
            o.pass = false;
        }
    }
    o.detail = std::to_string(invocations.size()) + " invocations run twice, " + std::to_string(mismatches) +
               " differ or fail";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 inclusion suite", inclusion_suite},
        {"2 weight-bound identity", weight_bound_identity},
        {"3 worked delta table", worked_delta_table},
        {"4 eps = 1 closed form", eps_one_closed_form},
        {"5 closed-form norm oracles", closed_form_norms},
        {"6 continuity bound", continuity_bound},
        {"7 oracle equivalence", oracle_equivalence},
        {"8 monotonicity", monotonicity},
        {"9 CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
