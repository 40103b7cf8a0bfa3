#include <doctest.h>

#include <cmath>
#include <functional>

#include "germnorm/eps_expr.hpp"
#include "germnorm/families.hpp"
#include "germnorm/lemma.hpp"
#include "oracles.hpp"

using namespace germnorm;

namespace {

EpsSequence<double> eps_of(const std::function<double(double)>& f, std::size_t count) {
    std::vector<double> v;
    for (std::size_t k = 1; k <= count; ++k) {
        v.push_back(f(static_cast<double>(k)));
    }
    return EpsSequence<double>::from_values(v);
}

const std::vector<std::pair<const char*, std::function<double(double)>>> eps_matrix = {
    {"1", [](double) { return 1.0; }},
    {"1/k^2", [](double k) { return 1.0 / (k * k); }},
    {"2^-k", [](double k) { return std::pow(2.0, -k); }},
    {"10^-k", [](double k) { return std::pow(10.0, -k); }},
};

} // namespace

TEST_CASE("build_delta with eps = 1 gives delta_n = 1/n") {
    auto ds = build_delta(eps_of([](double) { return 1.0; }, 41), 40);
    REQUIRE(ds.jumps.size() == 40);
    for (std::size_t k = 1; k <= 40; ++k) {
        CHECK(ds.jumps[k - 1] == k);
    }
    for (std::size_t n = 1; n <= 40; ++n) {
        CHECK(std::abs(ds.deltas.value(n) * static_cast<double>(n) - 1.0) <= 1e-12);
    }
}

TEST_CASE("build_delta worked table for eps_k = 2^-k") {
    // scan in plain arithmetic first: n_2 = 3, n_3 = 6
    CHECK(oracle::scan_jump(0.25, 2, 1, 100) == 3);
    CHECK(oracle::scan_jump(0.125, 3, 3, 100) == 6);

    auto ds = build_delta(EpsSequence<double>::from_values({0.5, 0.25, 0.125}), 7);
    CHECK(ds.jumps == std::vector<std::size_t>{1, 3, 6});
    CHECK(ds.deltas.value(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ds.deltas.value(2) == doctest::Approx(2.0).epsilon(1e-14));
    for (std::size_t n = 3; n <= 5; ++n) {
        CHECK(ds.deltas.value(n) == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
    }
    CHECK(ds.deltas.value(6) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
    CHECK(ds.deltas.value(7) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
    CHECK(std::abs(ds.deltas.value(3) - 0.79370) < 1e-5);
    CHECK(std::abs(ds.deltas.value(6) - 0.47140) < 1e-5);
}

TEST_CASE("n_1 is always 1") {
    for (double e1 : {1.0, 0.5, 1e-3, 1e-300}) {
        auto ds = build_delta(EpsSequence<double>::from_values({e1}), 5);
        CHECK(ds.jumps.front() == 1);
    }
}

TEST_CASE("eps validation and clamping") {
    CHECK_THROWS_AS(EpsSequence<double>::from_values({0.5, 0.0}), InputError);
    CHECK_THROWS_AS(EpsSequence<double>::from_values({-1.0}), InputError);
    CHECK_THROWS_AS(EpsSequence<double>::from_values({}), InputError);
    auto eps = EpsSequence<double>::from_values({3.0, 0.5, 2.0});
    CHECK(eps.clamped_count() == 2);
    CHECK(eps.value(1) == 1.0);
    CHECK(eps.value(3) == 1.0);
    CHECK(eps.value(10) == 1.0); // repeats the last entry
    CHECK_THROWS_AS(build_delta(eps, 0), InputError);
}

TEST_CASE("delta system invariants over the eps matrix") {
    for (const auto& [name, f] : eps_matrix) {
        CAPTURE(name);
        for (std::size_t N : {10u, 20u, 40u}) {
            auto ds = build_delta(eps_of(f, N + 1), N);
            REQUIRE(ds.jumps.front() == 1);
            for (std::size_t i = 1; i < ds.jumps.size(); ++i) {
                CHECK(ds.jumps[i] > ds.jumps[i - 1]);
            }
            for (std::size_t k = 1; k <= ds.segments(); ++k) {
                const double eps_k = f(static_cast<double>(k));
                const std::size_t n_k = ds.jumps[k - 1];
                // k - 1 < eps_k^{1/n_k} k
                CHECK(static_cast<double>(k - 1) < std::pow(eps_k, 1.0 / static_cast<double>(n_k)) * static_cast<double>(k));
                // minimality: the condition fails one step earlier when that is still admissible
                if (k >= 2 && n_k - 1 > ds.jumps[k - 2]) {
                    const double slack = std::log(eps_k) / static_cast<double>(n_k - 1) + std::log(static_cast<double>(k)) -
                                         std::log(static_cast<double>(k - 1));
                    CHECK(slack <= 1e-12);
                }
                // agrees with the independent plain-arithmetic scan
                const std::size_t prev = k == 1 ? 0 : ds.jumps[k - 2];
                CHECK(oracle::scan_jump(eps_k, k, prev, 1000) == n_k);
                auto [lo, hi] = ds.segment(k);
                for (std::size_t n = lo; n < hi; ++n) {
                    const double expected = 1.0 / (std::pow(eps_k, 1.0 / static_cast<double>(n_k)) * static_cast<double>(k));
                    CHECK(std::abs(ds.deltas.value(n) - expected) <= 1e-12 * expected);
                    CHECK(ds.governing(n) == k);
                }
            }
            // the next jump would start beyond N
            const std::size_t K = ds.segments();
            const std::size_t next = oracle::scan_jump(f(static_cast<double>(K + 1)), K + 1, ds.jumps.back(), 100000);
            CHECK((next == 0 || next > N));
            // null-sequence witness
            for (std::size_t k = 2; k <= ds.segments(); ++k) {
                for (std::size_t n = ds.jumps[k - 1]; n <= N; ++n) {
                    CHECK(ds.deltas.value(n) < 1.0 / static_cast<double>(k - 1));
                }
            }
        }
    }
}

TEST_CASE("margin shifts jumps past the minimal choice") {
    auto eps = eps_of([](double) { return 1.0; }, 41);
    auto ds = build_delta(eps, 40, 2);
    CHECK(ds.jumps == std::vector<std::size_t>{1, 4, 7, 10, 13, 16, 19, 22, 25, 28, 31, 34, 37, 40});
    CHECK(verify_weight_bound(ds, 40).pass);
}

TEST_CASE("verify_weight_bound examples") {
    auto one = build_delta(eps_of([](double) { return 1.0; }, 11), 10);
    for (const auto& c : verify_weight_bound(one, 10).checks) {
        CHECK(std::abs(c.margin) <= 1e-12);
    }

    auto two = build_delta(EpsSequence<double>::from_values({0.5, 0.25, 0.125}), 7);
    auto report = verify_weight_bound(two, 7);
    CHECK(report.pass);
    const auto& c4 = report.checks[3];
    CHECK(c4.n == 4);
    CHECK(c4.k == 2);
    CHECK(std::exp(-4.0 * two.deltas.log_value(4)) == doctest::Approx(std::pow(2.0, 4.0 / 3.0)).epsilon(1e-14));
    CHECK(c4.margin == doctest::Approx(std::log(4.0 / std::pow(2.0, 4.0 / 3.0))).epsilon(1e-14));
    for (auto n_k : two.jumps) {
        CHECK(std::abs(report.checks[n_k - 1].margin) <= 1e-12);
    }
    CHECK_THROWS_AS(verify_weight_bound(two, 8), ShapeError);
}

TEST_CASE("weight bound margins hold for fast-decaying eps") {
    for (const auto& [name, f] : eps_matrix) {
        CAPTURE(name);
        auto ds = build_delta(eps_of(f, 41), 40);
        auto report = verify_weight_bound(ds, 40);
        CHECK(report.pass);
        CHECK(report.worst_margin >= -1e-9);
    }
    // tiny eps stays finite in log form
    auto tiny = build_delta(EpsSequence<double>::from_values({1e-300, 1e-300}), 40);
    CHECK(tiny.jumps.size() == 1);
    CHECK(verify_weight_bound(tiny, 40).pass);
}

TEST_CASE("decompose: zero element") {
    auto ds = build_delta(parse_eps("1/k^2", 11), 10);
    auto bd = decompose(TruncatedElementD::zero_scalar(2, 10), ds);
    CHECK(bd.zero_shell == ZeroShellConvention::absorbed);
    for (const auto& b : bd.blocks) {
        CHECK(b.xi.is_zero());
        CHECK(b.certified_norm.is_zero());
    }
    CHECK(verify_inclusion(TruncatedElementD::zero_scalar(2, 10), ds).pass);
    for (const auto& e : verify_inclusion(TruncatedElementD::zero_scalar(2, 10), ds).blocks) {
        CHECK(std::isinf(e.margin));
    }
}

TEST_CASE("decompose: boundary element under eps = 1") {
    const std::size_t N = 12;
    auto ds = build_delta(parse_eps("1", N + 1), N);
    auto x = boundary_element(ds, 1, N);
    auto bd = decompose(x, ds);
    REQUIRE(bd.blocks.size() == N);
    for (const auto& b : bd.blocks) {
        if (b.k == 1) {
            CHECK(b.lo == 0);
        } else {
            CHECK(b.lo == b.k);
        }
        CHECK(b.hi == b.k + 1);
        CHECK(std::abs(b.certified_norm.log_value) <= 1e-12);
    }
    CHECK(reconstruct(bd) == x);
    auto cert = verify_inclusion(x, ds);
    CHECK(cert.pass);
    CHECK_FALSE(cert.rescaled);
    for (const auto& e : cert.blocks) {
        CHECK(std::abs(e.margin) <= 1e-12);
    }
}

TEST_CASE("decompose: random unit elements satisfy the block bounds") {
    for (const auto& [name, f] : eps_matrix) {
        CAPTURE(name);
        auto ds = build_delta(eps_of(f, 21), 20);
        SampleOptions opts;
        opts.dim = 2;
        opts.order_cap = 20;
        for (std::uint64_t seed = 0; seed < 250; ++seed) {
            auto x = random_unit_element(opts, sample_seed(5, seed), ds.deltas);
            auto bd = decompose(x, ds);
            REQUIRE(reconstruct(bd) == x);
            for (const auto& b : bd.blocks) {
                if (!b.certified_norm.is_zero()) {
                    REQUIRE(b.certified_norm.log_value <= b.log_bound + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("verify_inclusion on random germ elements, d = 2, N = 20, eps = 1/k^2") {
    auto ds = build_delta(parse_eps("1/k^2", 21), 20);
    SampleOptions opts;
    opts.dim = 2;
    opts.order_cap = 20;
    opts.mode = PayloadMode::germ;
    std::size_t passed = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        passed += verify_inclusion(random_unit_element(opts, sample_seed(7, seed), ds.deltas), ds).pass;
    }
    CHECK(passed == 1000);
}

TEST_CASE("verify_inclusion rescales elements outside the unit ball") {
    auto ds = build_delta(parse_eps("2^-k", 11), 10);
    SampleOptions opts;
    opts.order_cap = 10;
    auto x = scale(random_unit_element(opts, 3, ds.deltas), 1e6);
    auto cert = verify_inclusion(x, ds);
    CHECK(cert.rescaled);
    CHECK(cert.seminorm.log_value == doctest::Approx(std::log(1e6)).epsilon(1e-12));
    CHECK(cert.pass);
}

TEST_CASE("zero shell above eps_1 becomes its own block") {
    auto ds = build_delta(parse_eps("2^-k", 9), 8);
    auto x = restrict_shells(boundary_element(ds, 1, 8), 0, 1); // x_0 = 1 > eps_1 = 1/2
    auto bd = decompose(x, ds);
    CHECK(bd.zero_shell == ZeroShellConvention::separate_block);
    CHECK(bd.blocks.front().k == 0);
    CHECK(bd.blocks.front().hi == 1);
    CHECK(bd.blocks[1].lo == 1);
    CHECK(reconstruct(bd) == x);
    auto cert = verify_inclusion(x, ds);
    CHECK(cert.pass);
    CHECK(cert.zero_shell == ZeroShellConvention::separate_block);

    auto small = scale(x, 0.25);
    CHECK(decompose(small, ds).zero_shell == ZeroShellConvention::absorbed);
}

TEST_CASE("decompose scaling covariance") {
    auto ds = build_delta(parse_eps("1/k", 16), 15);
    SampleOptions opts;
    opts.dim = 3;
    opts.order_cap = 15;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto x = random_unit_element(opts, seed, ds.deltas);
        const double lambda = 0.125 * static_cast<double>(seed + 1);
        auto a = decompose(x, ds);
        auto b = decompose(scale(x, lambda), ds);
        if (a.blocks.size() != b.blocks.size()) {
            continue; // the zero-shell convention switched
        }
        for (std::size_t i = 0; i < a.blocks.size(); ++i) {
            if (a.blocks[i].certified_norm.is_zero()) {
                CHECK(b.blocks[i].certified_norm.is_zero());
            } else {
                const double expected = a.blocks[i].certified_norm.log_value + std::log(lambda);
                CHECK(std::abs(b.blocks[i].certified_norm.log_value - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
            }
        }
    }
}

TEST_CASE("decompose needs a delta system covering the element") {
    auto ds = build_delta(parse_eps("1", 6), 5);
    CHECK_THROWS_AS(decompose(TruncatedElementD::zero_scalar(1, 6), ds), ShapeError);
    CHECK_NOTHROW(decompose(TruncatedElementD::zero_scalar(1, 4), ds));
}
