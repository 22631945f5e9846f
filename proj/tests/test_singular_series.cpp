#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "singser/error.hpp"
#include "singser/singular_series.hpp"
#include "singser/statistics.hpp"

using namespace singser;
using std::numbers::pi;

TEST_CASE("residue against class-number formula values") {
    struct Case {
        const char* field;
        double value;
    };
    const Case cases[] = {
        {"D=-1", pi / 4},                                              // 2 pi h/(w sqrt|d|), h=1, w=4, d=-4
        {"D=-3,half", pi / (3 * std::sqrt(3.0))},                      // h=1, w=6, d=-3
        {"D=2", std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0)},         // 2 h log eps/sqrt d, eps=1+sqrt2, d=8
        {"D=5,half", 2 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)},
        {"D=-5", 2 * pi * 2 / (2 * std::sqrt(20.0))},                  // h=2, w=2
        {"D=-7,half", 2 * pi / (2 * std::sqrt(7.0))},
        {"D=3", 2 * std::log(2 + std::sqrt(3.0)) / std::sqrt(12.0)},
        {"D=10", 2 * 2 * std::log(3 + std::sqrt(10.0)) / std::sqrt(40.0)},  // h=2
    };
    for (const auto& c : cases) {
        CAPTURE(c.field);
        auto r = residue_rk(FieldSpec::parse(c.field), 1e-9);
        CHECK(r.error_bound <= 1e-9);
        CHECK(r.error_bound > 0.0);
        CHECK(std::abs(r.value - c.value) <= r.error_bound);
    }
    auto F = FieldSpec::parse("D=-1");
    CHECK(residue_rk(F, 1e-4).error_bound > residue_rk(F, 1e-8).error_bound);
    CHECK(residue_rk(F, 1e-4).terms < residue_rk(F, 1e-8).terms);
    CHECK_THROWS_AS(residue_rk(F, 0.0), Error);
    try {
        residue_rk(F, 1e-12, 1000);
        FAIL("expected a budget error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("singular series examples") {
    auto F = FieldSpec::parse("D=-1");
    CHECK(singular_series(F, {1, 0}, 1000).value == 0.0);
    auto a = singular_series(F, {1, 1}, 10000), b = singular_series(F, {1, 1}, 1000000);
    CHECK(a.value > 0.0);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound * a.value);
    CHECK(a.tail_bound <= 4.0 / 10000);
    CHECK_THROWS_AS(singular_series(F, {0, 0}, 100), Error);
    CHECK_THROWS_AS(singular_series(F, {1, 1}, 1), Error);
}

TEST_CASE("rational singular series") {
    CHECK(singular_series_rational(1, 1000).value == 0.0);
    CHECK(singular_series_rational(-7, 1000).value == 0.0);
    auto s2 = singular_series_rational(2, 10000000);
    CHECK(std::abs(s2.value - 1.3203236316937391) <= s2.tail_bound * s2.value + 1e-12);
    auto s6 = singular_series_rational(6, 10000000);
    CHECK(s6.value == doctest::Approx(2 * s2.value).epsilon(1e-14));
    CHECK(s6.value == doctest::Approx(2.640647).epsilon(1e-6));
    CHECK(singular_series_rational(-6, 1000).value == singular_series_rational(6, 1000).value);
    CHECK_THROWS_AS(singular_series_rational(0, 100), Error);

    RationalSingularTable t(10000);
    auto sieve = t.sieve(1000);
    for (std::int64_t h = 1; h <= 1000; ++h) {
        REQUIRE(sieve[h - 1] == t.evaluate(h).value);
        REQUIRE(std::abs(t.euler_product(h) - sieve[h - 1]) <= 1e-12 * std::max(1.0, sieve[h - 1]));
    }
}

TEST_CASE("sieved box equals per-eta evaluation exactly") {
    for (const char* spec : {"D=-1", "D=-3,half", "D=2", "D=5,half", "D=-5"}) {
        CAPTURE(spec);
        auto F = FieldSpec::parse(spec);
        SingularSeriesTable table(F, 1000);
        for (unsigned threads : {1u, 3u}) {
            auto box = sieved_singular_box(table, 10, threads);
            CHECK(std::isnan(box.at(0, 0)));
            for (std::int64_t y = -10; y <= 10; ++y) {
                for (std::int64_t x = -10; x <= 10; ++x) {
                    if (x == 0 && y == 0) continue;
                    const QuadInt eta{x, y};
                    const double v = box.at(x, y);
                    REQUIRE(v == table.evaluate(eta).value);
                    REQUIRE(v == singular_series(F, eta, 1000).value);
                    REQUIRE(std::abs(table.euler_product(eta) - v) <= 1e-12 * std::max(1.0, v));
                    REQUIRE(v == box.at(-x, -y));
                    const auto c = F.conjugate(eta);
                    if (sup_norm(c) <= 10) REQUIRE(v == box.at(c.k1, c.k2));
                }
            }
        }
    }
}

TEST_CASE("norm-2 ideal in Q(i) corrects exactly an index-2 sublattice") {
    auto F = FieldSpec::parse("D=-1");
    SingularSeriesTable table(F, 500);
    auto box = sieved_singular_box(table, 20);
    std::int64_t nonzero = 0, total = 0;
    for (std::int64_t y = -20; y <= 20; ++y)
        for (std::int64_t x = -20; x <= 20; ++x) {
            if (x == 0 && y == 0) continue;
            ++total;
            nonzero += box.at(x, y) != 0.0;
            REQUIRE((box.at(x, y) != 0.0) == ((x + y) % 2 == 0));
        }
    CHECK(nonzero * 2 == total);
}

TEST_CASE("unit multiples share all fields") {
    auto F = FieldSpec::parse("D=2");
    SingularSeriesTable table(F, 20000);
    const QuadInt unit{1, 1};
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> c(-40, 40);
    for (int i = 0; i < 200; ++i) {
        QuadInt eta{c(rng), c(rng)};
        if (eta == QuadInt{}) continue;
        auto a = table.evaluate(eta), b = table.evaluate(F.mul(eta, unit));
        CHECK(a.value == b.value);
        CHECK(a.tail_bound == b.tail_bound);
        CHECK(a.cutoff == b.cutoff);
    }
}

TEST_CASE("tail bounds are honest") {
    for (const char* spec : {"D=-1", "D=2", "D=-3,half"}) {
        auto F = FieldSpec::parse(spec);
        SingularSeriesTable lo(F, 2000), hi(F, 20000);
        for (std::int64_t x = -6; x <= 6; ++x)
            for (std::int64_t y = -6; y <= 6; ++y) {
                if (x == 0 && y == 0) continue;
                auto a = lo.evaluate({x, y}), b = hi.evaluate({x, y});
                REQUIRE(std::abs(a.value - b.value) <= a.tail_bound * a.value + 1e-15);
            }
    }
    // An element whose large prime factor lies beyond the cutoff.
    auto F = FieldSpec::parse("D=-1");
    SingularSeriesTable lo(F, 100), hi(F, 100000);
    const QuadInt eta{2 * 1009, 0};
    auto a = lo.evaluate(eta), b = hi.evaluate(eta);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound * a.value);
}

TEST_CASE("smoothed sums") {
    auto F = FieldSpec::parse("D=-1");
    SingularSeriesTable table(F, 100000);
    CHECK(singular_sum_smoothed(table, TestFunction::square().scaled(0.0), 8).sum == 0.0);
    auto s = singular_sum_smoothed(table, TestFunction::square(), 8);
    // Direct sum from per-eta evaluation.
    double direct = 0.0;
    for (std::int64_t x = -16; x <= 16; ++x)
        for (std::int64_t y = -16; y <= 16; ++y) {
            if (x == 0 && y == 0) continue;
            direct += (table.evaluate({x, y}).value - 1.0) * TestFunction::square()(x / 8.0, y / 8.0);
        }
    CHECK(s.sum == doctest::Approx(direct).epsilon(1e-12));
    CHECK(s.uncertainty > 0.0);
    auto box = sieved_singular_box(table, 16);
    CHECK_THROWS_AS(singular_sum_from_box(box, TestFunction::square(), 9), Error);
    CHECK_THROWS_AS(singular_sum_smoothed(table, TestFunction::square(), 1), Error);
    CHECK_THROWS_AS(sieved_singular_box(table, 100000, 1, 1000), Error);
}

TEST_CASE("finite differences of the smoothed sum") {
    // Successive dyadic differences approach -w(0) r_K 2 log 2 = -4.355 (square, Q(i)).
    auto F = FieldSpec::parse("D=-1");
    SingularSeriesTable table(F, 2'500'000);
    auto box = sieved_singular_box(table, 512);
    const auto w = TestFunction::square();
    const double target = -4.0 * (pi / 4) * 2 * std::log(2.0);
    double prev = singular_sum_from_box(box, w, 64).sum;
    for (double H : {128.0, 256.0}) {
        const double cur = singular_sum_from_box(box, w, H).sum;
        CHECK(std::abs((cur - prev) - target) < 0.15 * std::abs(target));
        prev = cur;
    }
}

TEST_CASE("montgomery sum") {
    RationalSingularTable t(10000);
    CHECK(montgomery_sum(2, t) == -0.5);
    for (std::int64_t H : {10, 100, 1000}) {
        double direct = 0.0;
        for (std::int64_t h = 1; h <= H; ++h)
            direct += (t.euler_product(h) - 1.0) * (1.0 - static_cast<double>(h) / static_cast<double>(H));
        CHECK(montgomery_sum(H, t) == doctest::Approx(direct).epsilon(1e-11));
    }
    CHECK_THROWS_AS(montgomery_sum(1, t), Error);
    RationalSingularTable big(1 << 16);
    auto values = big.sieve(1 << 16);
    std::vector<double> x, y;
    for (int k = 8; k <= 16; ++k) {
        x.push_back(std::log(static_cast<double>(1 << k)));
        y.push_back(montgomery_sum_from_values(1 << k, values));
    }
    CHECK(least_squares_slope(x, y) == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("mobius phi partial sums") {
    auto F = FieldSpec::parse("D=-1");
    CHECK(mobius_phi_partial_sum(F, 1) == 1.0);
    CHECK(mobius_phi_partial_sum(F, 2) == 2.0);
    // Y = 10: (1), N2 (phi 1), two N5 (phi 4), N9 (phi 8), two N10 (phi 4).
    CHECK(mobius_phi_partial_sum(F, 10) == doctest::Approx(1 + 1 + 0.5 + 0.125 + 0.5));
    CHECK_THROWS_AS(mobius_phi_partial_sum(F, 0), Error);
    const double rK = pi / 4;
    std::vector<double> drift;
    for (std::int64_t Y = 1000; Y <= 64000; Y *= 2) drift.push_back(mobius_phi_partial_sum(F, Y) - rK * std::log(Y));
    CHECK(*std::max_element(drift.begin(), drift.end()) - *std::min_element(drift.begin(), drift.end()) <= 0.5);
}
