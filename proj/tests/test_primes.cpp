#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/primes.hpp"

using namespace singser;

namespace {

// Classical description of Gaussian primes.
bool gaussian_prime(std::int64_t a, std::int64_t b) {
    if (a != 0 && b != 0) return is_prime_u64(static_cast<std::uint64_t>(a * a + b * b));
    const std::int64_t m = std::abs(a + b);
    return is_prime_u64(static_cast<std::uint64_t>(m)) && m % 4 == 3;
}

struct Brute {
    std::int64_t count = 0;
    double weight = 0.0;
};

Brute brute_box(const FieldSpec& F, double x1, double x2, double H) {
    Brute out;
    for (auto k2 = static_cast<std::int64_t>(std::ceil(x2 - H)); k2 <= static_cast<std::int64_t>(std::floor(x2 + H)); ++k2)
        for (auto k1 = static_cast<std::int64_t>(std::ceil(x1 - H)); k1 <= static_cast<std::int64_t>(std::floor(x1 + H));
             ++k1) {
            const QuadInt a{k1, k2};
            if (a == QuadInt{}) continue;
            out.count += is_prime_element(F, a);
            const auto n = std::abs(F.norm(a));
            if (n > 1) out.weight += 1.0 / std::log(static_cast<double>(n));
        }
    return out;
}

}  // namespace

TEST_CASE("prime element examples") {
    auto G = FieldSpec::parse("D=-1");
    CHECK(is_prime_element(G, {1, 1}));
    CHECK(is_prime_element(G, {3, 0}));
    CHECK(is_prime_element(G, {0, -7}));
    CHECK_FALSE(is_prime_element(G, {5, 0}));
    CHECK_FALSE(is_prime_element(G, {2, 0}));
    CHECK_FALSE(is_prime_element(G, {1, 0}));
    CHECK_FALSE(is_prime_element(G, {0, 0}));
    CHECK(is_prime_element(G, {2, 1}));
    auto R2 = FieldSpec::parse("D=2");
    CHECK(is_prime_element(R2, {3, 0}));           // 3 inert
    CHECK_FALSE(is_prime_element(R2, {7, 0}));     // 7 splits
    CHECK(is_prime_element(R2, {3, 1}));           // norm 7
    CHECK(is_prime_element(R2, {3, 3}));           // 3 times the unit 1 + sqrt 2
}

TEST_CASE("gaussian primes match the classical characterisation") {
    auto G = FieldSpec::parse("D=-1");
    for (std::int64_t a = -100; a <= 100; ++a)
        for (std::int64_t b = -100; b <= 100; ++b) REQUIRE(is_prime_element(G, {a, b}) == gaussian_prime(a, b));
}

TEST_CASE("small grid by hand") {
    auto G = FieldSpec::parse("D=-1");
    auto g = build_grid(G, 2);
    // Norm 2: four associates of 1+i. Norm 5: eight elements. 3 lies outside.
    CHECK(g.total_count() == 12);
    CHECK(count_primes_box(g, 0, 0, 1.5) == 4);
    CHECK(count_primes_box(g, 0, 0, 0.5) == 0);
    CHECK(count_primes_box(g, 0.4, 0.4, 0.3) == 0);
    CHECK(count_primes_box(g, 2, 1, 0.0) == 1);
    auto r = box_range(g, 0.5, -0.5, 1.0);
    CHECK(r.lo1 == 0);
    CHECK(r.hi1 == 1);
    CHECK(r.lo2 == -1);
    CHECK(r.hi2 == 0);
    CHECK_THROWS_AS(count_primes_box(g, 0, 0, 2.5), Error);
    try {
        count_primes_box(g, 1.0, 0.0, 1.5);
        FAIL("expected out-of-extent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfExtent);
    }
}

TEST_CASE("random boxes against brute force") {
    std::mt19937_64 rng(99);
    for (const char* spec : {"D=-1", "D=-3,half", "D=2", "D=5,half", "D=-5", "D=10"}) {
        CAPTURE(spec);
        auto F = FieldSpec::parse(spec);
        auto g = build_grid(F, 60, 2);
        std::uniform_real_distribution<double> c(-40.0, 40.0), h(0.0, 19.5);
        for (int i = 0; i < 200; ++i) {
            const double x1 = c(rng), x2 = c(rng), H = h(rng);
            auto b = brute_box(F, x1, x2, H);
            REQUIRE(count_primes_box(g, x1, x2, H) == b.count);
            REQUIRE(std::abs(log_weight_box(g, x1, x2, H) - b.weight) <= 1e-9 * std::max(1.0, b.weight));
        }
    }
}

TEST_CASE("additivity of adjacent boxes") {
    auto F = FieldSpec::parse("D=-7,half");
    auto g = build_grid(F, 40);
    // [-10, 10] x [-10, 10] splits into k1 in [-10, -1] and [0, 10]: use
    // the prefix tables directly.
    auto rect = [&](std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2) {
        return static_cast<std::int64_t>(g.count(b1, b2)) - g.count(a1 - 1, b2) - g.count(b1, a2 - 1) +
               g.count(a1 - 1, a2 - 1);
    };
    CHECK(count_primes_box(g, 0, 0, 10) == rect(-10, -1, -10, 10) + rect(0, 10, -10, 10));
    CHECK(count_primes_box(g, 0, 0, 10) == rect(-10, 10, -10, 10));
}

TEST_CASE("thread count does not change the tables") {
    auto F = FieldSpec::parse("D=3");
    auto a = build_grid(F, 150, 1), b = build_grid(F, 150, 3);
    CHECK(a.raw_counts() == b.raw_counts());
    CHECK(a.raw_weights() == b.raw_weights());
}

TEST_CASE("grid budget and limits") {
    auto F = FieldSpec::parse("D=-1");
    CHECK(grid_bytes(10) == doctest::Approx(22.0 * 22.0 * 12.0));
    try {
        build_grid(F, 1000, 1, 1e5);
        FAIL("expected a budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    CHECK_THROWS_AS(build_grid(F, -1), Error);
    CHECK(build_grid(F, 0).total_count() == 0);
}

TEST_CASE("save and load round trip") {
    auto F = FieldSpec::parse("D=5,half");
    auto g = build_grid(F, 30);
    const auto path = (std::filesystem::temp_directory_path() / "singser_grid_test.bin").string();
    save_grid(g, path);
    auto h = load_grid(path);
    CHECK(h.field() == F);
    CHECK(h.extent() == 30);
    CHECK(h.raw_counts() == g.raw_counts());
    CHECK(h.raw_weights() == g.raw_weights());
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_grid(path), Error);
}
