// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N[,N...]] [--expect-fail N[,N...]] [--threads T]
//
// Exit status is nonzero when a criterion fails that was not listed in
// --expect-fail. Expected failures still print FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/ideals.hpp"
#include "singser/parallel.hpp"
#include "singser/primes.hpp"
#include "singser/singular_series.hpp"
#include "singser/smoothing.hpp"
#include "singser/statistics.hpp"

using namespace singser;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double slope_vs_log(const std::vector<double>& H, const std::vector<double>& y) {
    std::vector<double> x;
    for (double h : H) x.push_back(std::log(h));
    return least_squares_slope(x, y);
}

// c_q(eta) straight from the product over the prime factors of q.
std::int64_t ramanujan_oracle(const SquarefreeIdeal& q, QuadInt eta) {
    std::int64_t c = 1;
    for (const auto& p : q.factors) c *= contains(p, eta) ? p.norm - 1 : -1;
    return c;
}

bool in_all(const SquarefreeIdeal& q, QuadInt eta) {
    for (const auto& p : q.factors)
        if (!contains(p, eta)) return false;
    return true;
}

std::vector<SquarefreeIdeal> divisor_oracle(const SquarefreeIdeal& q) {
    std::vector<SquarefreeIdeal> out;
    const std::size_t k = q.factors.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<PrimeIdeal> f;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) f.push_back(q.factors[i]);
        out.push_back(SquarefreeIdeal::from_factors(f));
    }
    return out;
}

const char* kIdentityFields[] = {"D=-1", "D=-3,half", "D=2", "D=5,half"};

Outcome criterion1() {
    std::int64_t checks = 0, bad = 0;
    for (const char* spec : kIdentityFields) {
        const auto F = FieldSpec::parse(spec);
        // Condensation: sum over d | c of c_d(eta) is N c on c and 0 off it.
        for (const auto& c : enumerate_squarefree_ideals(F, 200)) {
            const auto divs = divisor_oracle(c);
            for (std::int64_t y = -20; y <= 20; ++y)
                for (std::int64_t x = -20; x <= 20; ++x) {
                    const QuadInt eta{x, y};
                    std::int64_t s = 0;
                    for (const auto& d : divs) s += ramanujan_oracle(d, eta);
                    const std::int64_t expect = in_all(c, eta) ? c.norm : 0;
                    bad += s != expect || condensation_sum(c, eta) != expect;
                    ++checks;
                }
        }
        // Inversion: sum over q | a of S_q(H) equals N a times the smoothed
        // count of a. Square weight at integer H, scaled by H^2 to integers.
        const auto small = enumerate_squarefree_ideals(F, 50);
        for (std::int64_t H = 1; H <= 20; ++H) {
            auto weight = [H](QuadInt e) { return (2 * H - std::abs(e.k1)) * (2 * H - std::abs(e.k2)); };
            std::vector<std::int64_t> S(small.size(), 0), count(small.size(), 0);
            for (std::size_t i = 0; i < small.size(); ++i) {
                for (std::int64_t y = -2 * H; y <= 2 * H; ++y)
                    for (std::int64_t x = -2 * H; x <= 2 * H; ++x) {
                        const QuadInt eta{x, y};
                        const std::int64_t w = weight(eta);
                        S[i] += ramanujan_oracle(small[i], eta) * w;
                        if (in_all(small[i], eta)) count[i] += w;
                    }
                bad += S[i] != ramanujan_smoothed_sum_square_exact(small[i], H);
                bad += count[i] != ideal_smoothed_count_square_exact(small[i], H);
                checks += 2;
            }
            for (std::size_t a = 0; a < small.size(); ++a) {
                std::int64_t lhs = 0;
                for (const auto& q : divisor_oracle(small[a])) {
                    const auto it = std::find_if(small.begin(), small.end(), [&](const SquarefreeIdeal& s) {
                        return s.factors == q.factors;
                    });
                    lhs += S[static_cast<std::size_t>(it - small.begin())];
                }
                bad += lhs != small[a].norm * count[a];
                ++checks;
            }
        }
    }
    return {bad == 0, fmt("%lld exact identity checks, %lld mismatches", static_cast<long long>(checks),
                          static_cast<long long>(bad))};
}

Outcome criterion2() {
    struct Case {
        const char* field;
        double oracle;
    };
    const Case cases[] = {
        {"D=-1", pi / 4},
        {"D=-3,half", pi / (3 * std::sqrt(3.0))},
        {"D=2", std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0)},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto r = residue_rk(FieldSpec::parse(c.field), 1e-6);
        const double err = std::abs(r.value - c.oracle);
        ok = ok && err <= 1e-5;
        detail += fmt("%s r=%.12g err=%.2e; ", c.field, r.value, err);
    }
    return {ok, detail};
}

Outcome criterion3() {
    const std::int64_t Hmax = std::int64_t{1} << 17;
    RationalSingularTable table(10'000'000);
    const auto values = table.sieve(Hmax);
    std::vector<double> H, M;
    for (int k = 10; k <= 17; ++k) {
        H.push_back(static_cast<double>(std::int64_t{1} << k));
        M.push_back(montgomery_sum_from_values(std::int64_t{1} << k, values));
    }
    const double slope = slope_vs_log(H, M);
    return {std::abs(slope + 0.5) <= 0.05, fmt("slope %.5f (target -0.5 +- 0.05), P = 1e7", slope)};
}

Outcome criterion4() {
    const auto F = FieldSpec::parse("D=-1");
    const double rK = residue_rk(F, 1e-8).value;
    std::vector<double> drift;
    std::vector<std::int64_t> Ys;
    for (std::int64_t Y = 1000; Y <= 1'000'000; Y *= 2) Ys.push_back(Y);
    Ys.push_back(1'000'000);
    for (auto Y : Ys) drift.push_back(mobius_phi_partial_sum(F, Y) - rK * std::log(static_cast<double>(Y)));
    const auto [lo, hi] = std::minmax_element(drift.begin(), drift.end());
    return {*hi - *lo <= 0.5, fmt("drift range %.5f over Y in [1e3, 1e6] (min %.5f, max %.5f)", *hi - *lo, *lo, *hi)};
}

Outcome criterion5(unsigned threads) {
    const auto F = FieldSpec::parse("D=-1");
    const double rK = residue_rk(F, 1e-8).value;
    SingularSeriesTable table(F, 10'000'000);
    const auto box = sieved_singular_box(table, 1024, threads);
    bool ok = true;
    std::string detail;
    for (const auto& [w, tol] : {std::pair{TestFunction::disc(), 0.10}, std::pair{TestFunction::square(), 0.15}}) {
        std::vector<double> H, sums;
        for (double h = 32; h <= 512; h *= 2) {
            H.push_back(h);
            sums.push_back(singular_sum_from_box(box, w, h).sum);
        }
        const double slope = slope_vs_log(H, sums);
        const double target = -w.value_at_zero() * rK * 2.0;
        const double rel = std::abs(slope - target) / std::abs(target);
        ok = ok && rel <= tol;
        detail += fmt("%s slope %.5f target %.5f rel %.3f (tol %.2f); ", w.name().c_str(), slope, target, rel, tol);
    }
    return {ok, detail};
}

Outcome criterion6(unsigned threads) {
    const char* fields[] = {"D=-1", "D=-3,half", "D=-5", "D=-7,half", "D=2", "D=3", "D=10"};
    std::vector<double> deltas;
    for (int i = 1; i <= 9; ++i) deltas.push_back(i / 10.0);
    bool ok = true;
    std::string detail;
    for (const char* spec : fields) {
        const auto prof = variance_profile(FieldSpec::parse(spec), 1000, deltas, Sampler::exhaustive(), threads);
        std::vector<double> ratio;
        for (const auto& row : prof.rows) ratio.push_back(row.ratio);
        int inversions = 0;
        for (std::size_t i = 1; i < ratio.size(); ++i) inversions += ratio[i] > ratio[i - 1];
        const double slope = least_squares_slope(deltas, ratio);
        const bool field_ok = inversions <= 1 && slope >= -1.5 && slope <= -0.5;
        ok = ok && field_ok;
        detail += fmt("\n    %-10s slope %+.4f inversions %d %s  ratios", spec, slope, inversions, field_ok ? "ok  " : "FAIL");
        for (double r : ratio) detail += fmt(" %.3f", r);
    }
    return {ok, detail};
}

Outcome criterion7() {
    const auto z = z_baseline(100'000, 0.5);
    const double close = std::abs(std::sqrt(z.V_lambda) / std::log(1e5) - std::sqrt(z.V_prime)) / std::sqrt(z.V_prime);
    const bool ok = z.ratio_lambda >= 0.5 && z.ratio_lambda <= 1.5 && z.ratio_prime >= 0.5 && z.ratio_prime <= 1.5 &&
                    close <= 0.25;
    return {ok, fmt("H=%lld V_lambda ratio %.4f, V_prime ratio %.4f, closeness %.4f (<= 0.25)",
                    static_cast<long long>(z.H), z.ratio_lambda, z.ratio_prime, close)};
}

Outcome criterion8(unsigned threads) {
    std::int64_t bad_sieve = 0, bad_box = 0, bad_total = 0;
    for (const char* spec : {"D=-1", "D=-3,half", "D=2", "D=5,half", "D=-5", "D=10"}) {
        const auto F = FieldSpec::parse(spec);
        SingularSeriesTable table(F, 1000);
        const auto box = sieved_singular_box(table, 10, threads);
        for (std::int64_t y = -10; y <= 10; ++y)
            for (std::int64_t x = -10; x <= 10; ++x)
                if ((x != 0 || y != 0) && box.at(x, y) != table.evaluate({x, y}).value) ++bad_sieve;

        const std::int64_t R = 120;
        const auto grid = build_grid(F, R, threads);
        std::int64_t total = 0;
        double weight = 0.0;
        for (std::int64_t y = -R; y <= R; ++y)
            for (std::int64_t x = -R; x <= R; ++x) {
                if (x == 0 && y == 0) continue;
                total += is_prime_element(F, {x, y});
                const auto n = std::abs(F.norm({x, y}));
                if (n > 1) weight += 1.0 / std::log(static_cast<double>(n));
            }
        bad_total += total != grid.total_count() || std::abs(weight - grid.total_weight()) > 1e-9 * weight;

        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> c(-80.0, 80.0), h(0.0, 39.5);
        for (int i = 0; i < 200; ++i) {
            const double x1 = c(rng), x2 = c(rng), H = h(rng);
            std::int64_t brute = 0;
            for (auto k2 = static_cast<std::int64_t>(std::ceil(x2 - H)); k2 <= std::floor(x2 + H); ++k2)
                for (auto k1 = static_cast<std::int64_t>(std::ceil(x1 - H)); k1 <= std::floor(x1 + H); ++k1)
                    brute += (k1 != 0 || k2 != 0) && is_prime_element(F, {k1, k2});
            bad_box += brute != count_primes_box(grid, x1, x2, H);
        }
    }
    return {bad_sieve == 0 && bad_box == 0 && bad_total == 0,
            fmt("sieve mismatches %lld, box mismatches %lld / 1200, grid total mismatches %lld / 6",
                static_cast<long long>(bad_sieve), static_cast<long long>(bad_box), static_cast<long long>(bad_total))};
}

Outcome criterion9() {
    const auto F = FieldSpec::parse("D=-1");
    bool ok = true;
    std::string detail;

    // Calibrate c = min N a * lambda1(dual)^2 on norms <= 100, then check the
    // vanishing of the dual count on held-out ideals of norm in (100, 1000].
    double c = INFINITY;
    std::int64_t held = 0, nonzero = 0;
    for (const auto& a : enumerate_squarefree_ideals(F, 1000)) {
        const auto L = ideal_lattice(a);
        if (a.norm <= 100) {
            const double l = dual_shortest_length(L);
            c = std::min(c, static_cast<double>(a.norm) * l * l);
            continue;
        }
        for (double frac : {0.25, 0.5, 0.9, 0.999}) {
            const double r = std::sqrt(frac * c / static_cast<double>(a.norm));
            nonzero += dual_lattice_count(L, r) != 0;
            ++held;
        }
    }
    ok = ok && nonzero == 0 && c > 0.0;
    detail += fmt("c = %.6g, nonzero dual counts below threshold %lld / %lld; ", c, static_cast<long long>(nonzero),
                  static_cast<long long>(held));

    // Smoothed counts for ideals of norm 2, 5, 9, 25.
    std::vector<SquarefreeIdeal> picks;
    for (std::int64_t n : {2, 5, 9, 25}) {
        for (const auto& a : enumerate_squarefree_ideals(F, n))
            if (a.norm == n) {
                picks.push_back(a);
                break;
            }
    }
    ok = ok && picks.size() == 4;
    const auto disc = TestFunction::disc(), square = TestFunction::square();
    const double H = 50.0;
    for (const auto& a : picks) {
        // Nonzero elements of a have |m(eta)|^2 = N(eta) >= N a, so the support
        // radius 2 isolates eta = 0 once N a >= 4 H^2 (disc) or 8 H^2 (square).
        const double top_disc = ideal_smoothed_count(a, disc, std::sqrt(a.norm / 4.0));
        const double top_square = ideal_smoothed_count(a, square, std::sqrt(a.norm / 8.0));
        const double bulk = ideal_smoothed_count(a, disc, H);
        const double expect = H * H * disc.fourier_at_zero() / static_cast<double>(a.norm);
        const double rel = std::abs(bulk - expect) / expect;
        const bool a_ok = top_disc == disc.value_at_zero() && top_square == square.value_at_zero() && rel <= 0.05;
        ok = ok && a_ok;
        detail += fmt("N=%lld top %s bulk rel %.2e; ", static_cast<long long>(a.norm), a_ok ? "exact" : "MISS", rel);
    }
    return {ok, detail};
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto next = s.find(',', pos);
        out.insert(std::stoi(s.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only, expect_fail;
    unsigned threads = default_threads();
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = parse_list(argv[++i]);
        } else if (arg == "--expect-fail" && i + 1 < argc) {
            expect_fail = parse_list(argv[++i]);
        } else if (arg == "--threads" && i + 1 < argc) {
            threads = static_cast<unsigned>(std::stoul(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--only N,...] [--expect-fail N,...] [--threads T]\n");
            return 2;
        }
    }
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1},
        {2, criterion2},
        {3, criterion3},
        {4, criterion4},
        {5, [&] { return criterion5(threads); }},
        {6, [&] { return criterion6(threads); }},
        {7, criterion7},
        {8, [&] { return criterion8(threads); }},
        {9, criterion9},
    };
    int unexpected = 0;
    for (const auto& [id, run] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const Error& e) {
            o = {false, std::string("error: code=") + error_code_name(e.code()) + " message=" + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool expected = expect_fail.count(id) > 0;
        std::printf("criterion %d: %s (%.1fs)%s %s\n", id, o.pass ? "PASS" : "FAIL", secs,
                    !o.pass && expected ? " [expected failure]" : "", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass && !expected) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
