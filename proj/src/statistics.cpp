#include "singser/statistics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/parallel.hpp"
#include "singser/singular_series.hpp"

namespace singser {

namespace {

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct Partial {
    std::int64_t n = 0;
    std::int64_t pi = 0;
    std::int64_t pi2 = 0;
    double A = 0.0, piA = 0.0, A2 = 0.0, dev2 = 0.0;

    void add(std::int64_t count, double a) {
        ++n;
        pi += count;
        pi2 += count * count;
        A += a;
        piA += static_cast<double>(count) * a;
        A2 += a * a;
        const double d = static_cast<double>(count) - a;
        dev2 += d * d;
    }
};

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Sampler Sampler::parse(std::string_view text, std::uint64_t seed) {
    if (text == "exhaustive") return exhaustive();
    if (text.substr(0, 6) == "jitter") {
        int q = 4;
        if (text.size() > 6) {
            if (text[6] != ':') fail(ErrorCode::InvalidArgument, "sampler must be exhaustive or jitter[:q]");
            auto body = text.substr(7);
            auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), q);
            if (ec != std::errc() || ptr != body.data() + body.size() || q < 1) {
                fail(ErrorCode::InvalidArgument, "bad jitter subdivision in '" + std::string(text) + "'");
            }
        }
        return jitter(q, seed);
    }
    fail(ErrorCode::InvalidArgument, "unknown sampler '" + std::string(text) + "'");
}

std::string Sampler::name() const {
    if (kind == SamplerKind::Exhaustive) return "exhaustive";
    return "jitter:" + std::to_string(subdivisions);
}

SampleStats sample_statistics(const PrefixGrid& grid, double X, double H, const Sampler& sampler, double rK,
                              unsigned threads) {
    if (!(X >= 0.0) || !(H >= 0.0)) fail(ErrorCode::InvalidArgument, "X and H must be >= 0");
    if (!(rK > 0.0)) fail(ErrorCode::InvalidArgument, "r_K must be positive");
    if (X + H > static_cast<double>(grid.extent())) {
        fail(ErrorCode::OutOfExtent, "grid extent " + std::to_string(grid.extent()) + " is smaller than X + H = " +
                                         std::to_string(X + H));
    }
    const auto Xi = static_cast<std::int64_t>(std::floor(X));
    const bool jitter = sampler.kind == SamplerKind::StratifiedJitter;
    if (jitter && Xi < 1) fail(ErrorCode::InvalidArgument, "jitter sampling needs X >= 1");
    if (jitter && sampler.subdivisions < 1) fail(ErrorCode::InvalidArgument, "jitter needs q >= 1");

    // Rows of centers: integer k2 for exhaustive, unit cells [b, b+1) for jitter.
    const std::int64_t row_lo = -Xi;
    const std::int64_t rows = jitter ? 2 * Xi : 2 * Xi + 1;
    constexpr std::int64_t rows_per_block = 8;
    const auto blocks = static_cast<std::size_t>((rows + rows_per_block - 1) / rows_per_block);
    std::vector<Partial> partial(blocks);

    parallel_blocks(blocks, threads, [&](std::size_t blk) {
        Partial& acc = partial[blk];
        const std::int64_t first = row_lo + static_cast<std::int64_t>(blk) * rows_per_block;
        const std::int64_t last = std::min(row_lo + rows - 1, first + rows_per_block - 1);
        for (std::int64_t b = first; b <= last; ++b) {
            if (!jitter) {
                for (std::int64_t a = -Xi; a <= Xi; ++a) {
                    const double x1 = static_cast<double>(a), x2 = static_cast<double>(b);
                    acc.add(count_primes_box(grid, x1, x2, H), log_weight_box(grid, x1, x2, H) / rK);
                }
                continue;
            }
            const int q = sampler.subdivisions;
            std::seed_seq seq{static_cast<std::uint32_t>(sampler.seed), static_cast<std::uint32_t>(sampler.seed >> 32),
                              static_cast<std::uint32_t>(b + Xi)};
            std::mt19937_64 rng(seq);
            for (std::int64_t a = -Xi; a < Xi; ++a) {
                for (int s = 0; s < q; ++s) {
                    for (int t = 0; t < q; ++t) {
                        const double x1 = static_cast<double>(a) + (s + unit_uniform(rng)) / q;
                        const double x2 = static_cast<double>(b) + (t + unit_uniform(rng)) / q;
                        acc.add(count_primes_box(grid, x1, x2, H), log_weight_box(grid, x1, x2, H) / rK);
                    }
                }
            }
        }
    });

    std::int64_t n = 0, pi = 0, pi2 = 0;
    Kahan A, piA, A2, dev2;
    for (const auto& p : partial) {
        n += p.n;
        pi += p.pi;
        pi2 += p.pi2;
        A.add(p.A);
        piA.add(p.piA);
        A2.add(p.A2);
        dev2.add(p.dev2);
    }
    SampleStats out;
    out.n = n;
    if (n == 0) return out;
    const double nd = static_cast<double>(n);
    out.E = static_cast<double>(pi) / nd;
    out.V = dev2.sum / nd;
    out.V_expanded = static_cast<double>(pi2) / nd - 2.0 * piA.sum / nd + A2.sum / nd;
    out.mean_A = A.sum / nd;
    return out;
}

double expectation_E(const PrefixGrid& grid, double X, double H, const Sampler& sampler, unsigned threads) {
    return sample_statistics(grid, X, H, sampler, 1.0, threads).E;
}

double variance_V(const PrefixGrid& grid, double X, double H, const Sampler& sampler, double rK,
                  unsigned threads) {
    return sample_statistics(grid, X, H, sampler, rK, threads).V;
}

double expected_primes_reference(double X, double H, double rK) {
    if (!(X > 0.5)) fail(ErrorCode::InvalidArgument, "reference needs vol(B_X) > 1, i.e. X > 1/2");
    return (2.0 * H) * (2.0 * H) / (rK * std::log((2.0 * X) * (2.0 * X)));
}

std::int64_t profile_extent(double X, const std::vector<double>& deltas) {
    double dmax = 0.0;
    for (double d : deltas) dmax = std::max(dmax, d);
    return static_cast<std::int64_t>(std::ceil(X + std::pow(X, dmax))) + 2;
}

std::vector<VarianceRow> variance_rows(const PrefixGrid& grid, double X, const std::vector<double>& deltas,
                                       const Sampler& sampler, double rK, unsigned threads) {
    std::vector<VarianceRow> rows;
    for (double delta : deltas) {
        if (!(delta > 0.0 && delta < 1.0)) {
            fail(ErrorCode::InvalidArgument, "delta must lie in (0, 1), got " + std::to_string(delta));
        }
        VarianceRow row;
        row.delta = delta;
        row.H = std::pow(X, delta);
        const auto s = sample_statistics(grid, X, row.H, sampler, rK, threads);
        row.E = s.E;
        row.V = s.V;
        row.ratio = s.E > 0.0 ? s.V / s.E : std::nan("");
        row.target = 1.0 - delta;
        row.n_samples = s.n;
        rows.push_back(row);
    }
    return rows;
}

VarianceProfile variance_profile(const FieldSpec& field, double X, const std::vector<double>& deltas,
                                 const Sampler& sampler, unsigned threads, double residue_tol) {
    if (!(X >= 1.0)) fail(ErrorCode::InvalidArgument, "X must be >= 1");
    if (deltas.empty()) fail(ErrorCode::InvalidArgument, "no delta values given");
    VarianceProfile out;
    const auto r = residue_rk(field, residue_tol);
    out.rK = r.value;
    out.rK_error = r.error_bound;
    out.extent = profile_extent(X, deltas);
    const auto grid = build_grid(field, out.extent, threads);
    out.rows = variance_rows(grid, X, deltas, sampler, out.rK, threads);
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::InvalidArgument, "slope needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) fail(ErrorCode::InvalidArgument, "slope needs distinct x values");
    return sxy / sxx;
}

RationalTables::RationalTables(std::int64_t N) : N_(N) {
    if (N < 0) fail(ErrorCode::InvalidArgument, "table limit must be >= 0");
    const auto size = static_cast<std::size_t>(N) + 1;
    const auto flags = prime_flags(static_cast<std::uint64_t>(N));
    std::vector<double> lam(size, 0.0), ppw(size, 0.0);
    for (std::int64_t p = 2; p <= N; ++p) {
        if (!flags[p]) continue;
        const double lp = std::log(static_cast<double>(p));
        int k = 1;
        for (std::int64_t q = p;; ++k) {
            lam[q] = lp;
            if (k >= 2) ppw[q] = 1.0 / k;
            if (q > N / p) break;
            q *= p;
        }
    }
    pi_.assign(size, 0);
    li_.assign(size, 0.0);
    psi_.assign(size, 0.0);
    pp_.assign(size, 0.0);
    Kahan li, psi, pp;
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        if (flags[n]) ++count;
        if (n >= 2) li.add(1.0 / std::log(static_cast<double>(n)));
        psi.add(lam[n]);
        pp.add(ppw[n]);
        pi_[n] = count;
        li_[n] = li.sum;
        psi_[n] = psi.sum;
        pp_[n] = pp.sum;
    }
}

std::size_t RationalTables::at(std::int64_t n) const {
    if (n < 0 || n > N_) {
        fail(ErrorCode::OutOfExtent, "index " + std::to_string(n) + " outside rational tables [0, " +
                                         std::to_string(N_) + "]");
    }
    return static_cast<std::size_t>(n);
}

double RationalTables::lambda(std::int64_t n) const {
    if (n < 1) return 0.0;
    return psi(n) - psi(n - 1);
}

namespace {

void check_xh(std::int64_t X, std::int64_t H) {
    if (X < 1) fail(ErrorCode::InvalidArgument, "X must be >= 1");
    if (H < 0) fail(ErrorCode::InvalidArgument, "H must be >= 0");
}

}  // namespace

double expectation_rational(const RationalTables& t, std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    std::int64_t total = 0;
    for (std::int64_t k = 0; k < X; ++k) total += t.pi(k + H) - t.pi(k);
    return static_cast<double>(total) / static_cast<double>(X);
}

double expectation_rational(std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    return expectation_rational(RationalTables(X - 1 + H), X, H);
}

double variance_rational_prime(const RationalTables& t, std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    Kahan s;
    for (std::int64_t k = 0; k < X; ++k) {
        const double d = static_cast<double>(t.pi(k + H) - t.pi(k)) - (t.li(k + H) - t.li(k));
        s.add(d * d);
    }
    return s.sum / static_cast<double>(X);
}

double variance_rational_prime(std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    return variance_rational_prime(RationalTables(X - 1 + H), X, H);
}

double variance_rational_lambda(const RationalTables& t, std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    Kahan s;
    for (std::int64_t k = 0; k < X; ++k) {
        const double d = (t.psi(k + H) - t.psi(k)) - static_cast<double>(H);
        s.add(d * d);
    }
    return s.sum / static_cast<double>(X);
}

double variance_rational_lambda(std::int64_t X, std::int64_t H) {
    check_xh(X, H);
    return variance_rational_lambda(RationalTables(X - 1 + H), X, H);
}

double prime_power_correction(double x, double H) {
    if (!std::isfinite(x) || !std::isfinite(H)) fail(ErrorCode::InvalidArgument, "x and H must be finite");
    if (!(H > 0.0) || x + H < 4.0) return 0.0;
    const auto lo = static_cast<std::int64_t>(std::floor(std::max(x, 0.0))) + 1;
    const auto hi = static_cast<std::int64_t>(std::floor(x + H));
    if (lo > hi) return 0.0;
    double total = 0.0;
    for (std::int64_t p : primes_up_to(static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(hi))))) {
        std::int64_t q = p * p;
        for (int k = 2;; ++k) {
            if (q >= lo) total += 1.0 / k;
            if (q > hi / p) break;
            q *= p;
        }
    }
    return total;
}

double prime_power_correction_constant(std::int64_t X, std::int64_t H) {
    if (X < 2 || H < 1) fail(ErrorCode::InvalidArgument, "need X >= 2 and H >= 1");
    RationalTables t(X + H);
    double best = 0.0;
    for (std::int64_t x = 2; x <= X; ++x) {
        const double c = (t.prime_powers(x + H) - t.prime_powers(x)) * std::sqrt(static_cast<double>(x)) /
                         static_cast<double>(H);
        best = std::max(best, c);
    }
    return best;
}

ZBaselineRow z_baseline(std::int64_t X, double delta) {
    if (X < 2) fail(ErrorCode::InvalidArgument, "X must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
    ZBaselineRow row;
    row.X = X;
    row.delta = delta;
    row.H = std::max<std::int64_t>(1, std::llround(std::pow(static_cast<double>(X), delta)));
    RationalTables t(X - 1 + row.H);
    row.E = expectation_rational(t, X, row.H);
    row.V_prime = variance_rational_prime(t, X, row.H);
    row.V_lambda = variance_rational_lambda(t, X, row.H);
    row.ratio_prime = row.V_prime / ((1.0 - delta) * row.E);
    const double logs = std::log(static_cast<double>(X)) - std::log(static_cast<double>(row.H));
    row.ratio_lambda = row.V_lambda / (static_cast<double>(row.H) * logs);
    return row;
}

}  // namespace singser
