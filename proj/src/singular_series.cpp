#include "singser/singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/parallel.hpp"

namespace singser {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Prime factors of n (n >= 1) not exceeding limit, ascending. Trial division
// stops at min(sqrt(n), limit); a leftover cofactor is prime only when the
// square-root bound was reached.
std::vector<std::int64_t> prime_factors_upto(std::uint64_t n, std::int64_t limit) {
    std::vector<std::int64_t> out;
    auto take = [&](std::uint64_t d) {
        if (n % d != 0) return;
        out.push_back(static_cast<std::int64_t>(d));
        while (n % d == 0) n /= d;
    };
    if (limit >= 2) take(2);
    std::uint64_t d = 3;
    const auto lim = static_cast<std::uint64_t>(std::max<std::int64_t>(limit, 0));
    for (; d <= lim && d <= n / d; d += 2) take(d);
    if (n > 1 && n <= lim && d > n / d) out.push_back(static_cast<std::int64_t>(n));
    return out;
}

void check_cutoff(std::int64_t P) {
    if (P < 2) fail(ErrorCode::InvalidArgument, "cutoff P must be >= 2, got " + std::to_string(P));
}

double correction_for_norm(std::int64_t N) {
    return static_cast<double>(N - 1) / static_cast<double>(N - 2);
}

double factor_for(std::int64_t N, int nu) {
    const double inv = 1.0 / static_cast<double>(N);
    const double d = 1.0 - inv;
    return (1.0 - nu * inv) / (d * d);
}

}  // namespace

ResidueValue residue_rk(const FieldSpec& field, double tol, std::int64_t max_terms) {
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
    const std::int64_t d = field.discriminant();
    const std::int64_t q = std::abs(d);

    // Remainder of the Euler-Maclaurin tail after K periods is at most
    // 2 zeta(3)/(2 pi)^3 * 2/K^3, plus accumulated rounding.
    const double em_const = 2.0 * 1.2020569031595942 / std::pow(2.0 * M_PI, 3) * 2.0;
    const double eps = std::numeric_limits<double>::epsilon();
    double K_real = std::ceil(std::cbrt(2.0 * em_const / tol));
    auto K = static_cast<std::int64_t>(std::max(1.0, K_real));
    const double terms_real = static_cast<double>(K) * static_cast<double>(q);
    const double rounding = 8.0 * eps * (std::log(terms_real) + 2.0);
    if (terms_real > static_cast<double>(max_terms) || rounding >= tol / 2) {
        fail(ErrorCode::BudgetExceeded,
             "tol " + std::to_string(tol) + " needs " + std::to_string(terms_real) + " terms for |d_K| = " +
                 std::to_string(q) + " (budget " + std::to_string(max_terms) + ")");
    }

    std::vector<int> chi(static_cast<std::size_t>(q) + 1, 0);
    for (std::int64_t a = 1; a <= q; ++a) chi[a] = kronecker(d, a);

    CompensatedSum head;
    for (std::int64_t k = 0; k < K; ++k) {
        double block = 0.0;
        const double base = static_cast<double>(k) * static_cast<double>(q);
        for (std::int64_t a = 1; a <= q; ++a) {
            if (chi[a] != 0) block += chi[a] / (base + static_cast<double>(a));
        }
        head.add(block);
    }

    // Tail sum_{k >= K} g(k) with g(x) = sum_a chi(a)/(x q + a):
    //   integral_K^inf g + g(K)/2 - g'(K)/12.
    const double Kq = static_cast<double>(K) * static_cast<double>(q);
    double integral = 0.0, g = 0.0, gprime = 0.0;
    for (std::int64_t a = 1; a <= q; ++a) {
        if (chi[a] == 0) continue;
        const double denom = Kq + static_cast<double>(a);
        integral -= chi[a] * std::log1p(static_cast<double>(a) / Kq);
        g += chi[a] / denom;
        gprime -= chi[a] * static_cast<double>(q) / (denom * denom);
    }
    integral /= static_cast<double>(q);
    const double tail = integral + g / 2.0 - gprime / 12.0;

    ResidueValue out;
    out.value = head.value() + tail;
    out.error_bound = em_const / (static_cast<double>(K) * K * K) + rounding;
    out.method = "period-blocks+euler-maclaurin";
    out.terms = K * q;
    return out;
}

double singular_tail_bound(std::int64_t P, std::int64_t abs_norm) {
    check_cutoff(P);
    const double Pm1 = static_cast<double>(P - 1);
    // At most two prime ideals of each norm m, and sum_{m > P} 1/(m-1)^2 <= 1/(P-1).
    const double lower = 2.0 / Pm1;
    // Ideals of norm > P containing eta: at most log|N eta| / log(P + 1), each
    // raising the product by at most a factor 1 + 1/P.
    double k = 0.0;
    if (abs_norm > P) {
        k = std::floor(std::log(static_cast<double>(abs_norm)) / std::log(static_cast<double>(P) + 1.0));
    }
    const double upper = std::expm1(k / Pm1);
    return std::max(lower, upper);
}

SingularSeriesTable::SingularSeriesTable(const FieldSpec& field, std::int64_t P) : field_(field), cutoff_(P) {
    check_cutoff(P);
    ideals_ = enumerate_prime_ideals(field, P);
    for (std::size_t i = 0; i < ideals_.size(); ++i) {
        const auto& id = ideals_[i];
        if (id.norm > 2) base_ *= factor_for(id.norm, 2);
        if (ranges_.empty() || rational_primes_.back() != id.p) {
            rational_primes_.push_back(id.p);
            ranges_.emplace_back(i, i + 1);
        } else {
            ranges_.back().second = i + 1;
        }
    }
    // Sort the lookup by p; ideals above one p are contiguous in the table.
    std::vector<std::size_t> order(rational_primes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return rational_primes_[x] < rational_primes_[y]; });
    std::vector<std::int64_t> ps;
    std::vector<std::pair<std::size_t, std::size_t>> rs;
    for (auto i : order) {
        ps.push_back(rational_primes_[i]);
        rs.push_back(ranges_[i]);
    }
    rational_primes_ = std::move(ps);
    ranges_ = std::move(rs);
}

double SingularSeriesTable::correction(std::size_t i) const {
    return correction_for_norm(ideals_.at(i).norm);
}

std::vector<std::size_t> SingularSeriesTable::containing_ideals(QuadInt eta) const {
    const std::int64_t n = field_.norm(eta);
    if (n == 0) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    std::vector<std::size_t> out;
    for (std::int64_t p : prime_factors_upto(static_cast<std::uint64_t>(n < 0 ? -static_cast<i128>(n) : n), cutoff_)) {
        auto it = std::lower_bound(rational_primes_.begin(), rational_primes_.end(), p);
        if (it == rational_primes_.end() || *it != p) continue;
        auto [lo, hi] = ranges_[static_cast<std::size_t>(it - rational_primes_.begin())];
        for (std::size_t i = lo; i < hi; ++i) {
            if (contains(ideals_[i], eta)) out.push_back(i);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SingularValue SingularSeriesTable::evaluate(QuadInt eta) const {
    const auto idx = containing_ideals(eta);
    double f2 = 1.0;
    for (const auto& id : ideals_) {
        if (id.norm > 2) break;
        f2 *= contains(id, eta) ? 2.0 : 0.0;
    }
    double v = f2 * base_;
    for (auto i : idx) {
        if (ideals_[i].norm > 2) v *= correction_for_norm(ideals_[i].norm);
    }
    const i128 n = field_.norm(eta);
    SingularValue out;
    out.value = v;
    out.cutoff = cutoff_;
    out.tail_bound = singular_tail_bound(cutoff_, narrow_checked(n < 0 ? -n : n));
    return out;
}

double SingularSeriesTable::euler_product(QuadInt eta) const {
    if (eta == QuadInt{}) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    double v = 1.0;
    for (const auto& id : ideals_) v *= factor_for(id.norm, contains(id, eta) ? 1 : 2);
    return v;
}

SingularValue singular_series(const FieldSpec& field, QuadInt eta, std::int64_t P) {
    if (eta == QuadInt{}) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    return SingularSeriesTable(field, P).evaluate(eta);
}

RationalSingularTable::RationalSingularTable(std::int64_t P) : cutoff_(P) {
    check_cutoff(P);
    primes_ = primes_up_to(P);
    for (std::int64_t p : primes_) {
        if (p > 2) base_ *= factor_for(p, 2);
    }
}

SingularValue RationalSingularTable::evaluate(std::int64_t h) const {
    if (h == 0) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    const std::uint64_t m = h < 0 ? static_cast<std::uint64_t>(-(h + 1)) + 1 : static_cast<std::uint64_t>(h);
    double v = (m % 2 == 0 ? 2.0 : 0.0) * base_;
    for (std::int64_t p : prime_factors_upto(m, cutoff_)) {
        if (p > 2) v *= correction_for_norm(p);
    }
    SingularValue out;
    out.value = v;
    out.cutoff = cutoff_;
    out.tail_bound = singular_tail_bound(cutoff_, static_cast<std::int64_t>(std::min<std::uint64_t>(
                                                      m, static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))));
    return out;
}

double RationalSingularTable::euler_product(std::int64_t h) const {
    if (h == 0) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    double v = 1.0;
    for (std::int64_t p : primes_) v *= factor_for(p, h % p == 0 ? 1 : 2);
    return v;
}

std::vector<double> RationalSingularTable::sieve(std::int64_t H) const {
    if (H < 1) fail(ErrorCode::InvalidArgument, "H must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(H));
    for (std::int64_t h = 1; h <= H; ++h) v[h - 1] = (h % 2 == 0 ? 2.0 : 0.0) * base_;
    for (std::int64_t p : primes_) {
        if (p == 2) continue;
        if (p > H) break;
        const double corr = correction_for_norm(p);
        for (std::int64_t h = p; h <= H; h += p) v[h - 1] *= corr;
    }
    return v;
}

SingularValue singular_series_rational(std::int64_t h, std::int64_t P) {
    if (h == 0) fail(ErrorCode::InvalidArgument, "S(0) is undefined");
    return RationalSingularTable(P).evaluate(h);
}

SingularBox sieved_singular_box(const SingularSeriesTable& table, std::int64_t H, unsigned threads,
                                std::int64_t max_entries) {
    if (H < 1) fail(ErrorCode::InvalidArgument, "box radius H must be >= 1");
    const std::int64_t side = 2 * H + 1;
    if (static_cast<double>(side) * static_cast<double>(side) > static_cast<double>(max_entries)) {
        fail(ErrorCode::BudgetExceeded, "box of radius " + std::to_string(H) + " needs " +
                                            std::to_string(static_cast<double>(side) * side) +
                                            " entries (budget " + std::to_string(max_entries) + ")");
    }
    const FieldSpec& field = table.field();
    const auto& ideals = table.ideals();
    const std::int64_t max_norm = max_abs_norm_in_box(field, H);

    SingularBox box;
    box.H = H;
    box.cutoff = table.cutoff();
    box.tail_bound = singular_tail_bound(table.cutoff(), max_norm);
    box.values.assign(static_cast<std::size_t>(side * side), 0.0);

    // Ideals of norm > 2 that can contain a box point, in table order.
    struct Walk {
        std::int64_t a, b, c;
        double corr;
    };
    std::vector<Walk> walks;
    std::vector<PrimeIdeal> norm2;
    for (const auto& id : ideals) {
        if (id.norm <= 2) {
            norm2.push_back(id);
            continue;
        }
        if (id.norm > max_norm) break;
        if (id.type == SplitType::Inert) {
            walks.push_back({id.p, 0, id.p, correction_for_norm(id.norm)});
        } else {
            walks.push_back({id.p, mod_floor(-*id.root, id.p), 1, correction_for_norm(id.norm)});
        }
    }

    const double base = table.base();
    constexpr std::int64_t rows_per_block = 32;
    const auto blocks = static_cast<std::size_t>((side + rows_per_block - 1) / rows_per_block);
    parallel_blocks(blocks, threads, [&](std::size_t blk) {
        const std::int64_t y_lo = -H + static_cast<std::int64_t>(blk) * rows_per_block;
        const std::int64_t y_hi = std::min(H, y_lo + rows_per_block - 1);
        for (std::int64_t y = y_lo; y <= y_hi; ++y) {
            double* row = &box.values[static_cast<std::size_t>((y + H) * side)];
            for (std::int64_t x = -H; x <= H; ++x) {
                double f2 = 1.0;
                for (const auto& id : norm2) f2 *= contains(id, QuadInt{x, y}) ? 2.0 : 0.0;
                row[x + H] = f2 * base;
            }
        }
        for (const auto& w : walks) {
            // Points (x, y) = (b t + a u, c t); rows y = c t inside the block.
            const std::int64_t t_lo = ceil_div(y_lo, w.c), t_hi = floor_div(y_hi, w.c);
            if (t_lo > t_hi) continue;
            // s = offset of the first x >= -H in row t, i.e. (b t + H) mod a.
            std::int64_t s = mod_floor(static_cast<std::int64_t>((i128{w.b} * t_lo + H) % w.a), w.a);
            for (std::int64_t t = t_lo; t <= t_hi; ++t) {
                double* row = &box.values[static_cast<std::size_t>((w.c * t + H) * side)];
                for (std::int64_t off = s; off < side; off += w.a) row[off] *= w.corr;
                s += w.b;
                if (s >= w.a) s -= w.a;
            }
        }
    });
    box.values[static_cast<std::size_t>(H * side + H)] = std::numeric_limits<double>::quiet_NaN();
    return box;
}

SmoothedSum singular_sum_from_box(const SingularBox& box, const TestFunction& w, double H) {
    if (!(H > 0.0)) fail(ErrorCode::InvalidArgument, "H must be positive");
    if (w.dimension() != 2) fail(ErrorCode::InvalidArgument, "weight " + w.name() + " is not two-dimensional");
    const auto R = static_cast<std::int64_t>(std::floor(w.support_radius() * H));
    if (R > box.H) {
        fail(ErrorCode::OutOfExtent, "box radius " + std::to_string(box.H) + " does not cover the support radius " +
                                         std::to_string(R));
    }
    SmoothedSum out;
    out.H = H;
    CompensatedSum total, unc;
    for (std::int64_t y = -R; y <= R; ++y) {
        for (std::int64_t x = -R; x <= R; ++x) {
            if (x == 0 && y == 0) continue;
            const double wt = w(static_cast<double>(x) / H, static_cast<double>(y) / H);
            if (wt == 0.0) continue;
            const double v = box.at(x, y);
            total.add((v - 1.0) * wt);
            unc.add(v * box.tail_bound * wt);
            ++out.terms;
        }
    }
    out.sum = total.value();
    out.uncertainty = unc.value();
    return out;
}

SmoothedSum singular_sum_smoothed(const SingularSeriesTable& table, const TestFunction& w, double H,
                                  unsigned threads) {
    if (!(H >= 2.0)) fail(ErrorCode::InvalidArgument, "H must be >= 2");
    const auto R = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(w.support_radius() * H)));
    return singular_sum_from_box(sieved_singular_box(table, R, threads), w, H);
}

double montgomery_sum_from_values(std::int64_t H, const std::vector<double>& values) {
    if (H < 1 || static_cast<std::size_t>(H) > values.size()) {
        fail(ErrorCode::InvalidArgument, "montgomery sum needs values for h = 1.." + std::to_string(H));
    }
    CompensatedSum s;
    const double Hd = static_cast<double>(H);
    for (std::int64_t h = 1; h <= H; ++h) {
        s.add((values[h - 1] - 1.0) * (static_cast<double>(H - h) / Hd));
    }
    return s.value();
}

double montgomery_sum(std::int64_t H, const RationalSingularTable& table) {
    if (H < 2) fail(ErrorCode::InvalidArgument, "H must be >= 2");
    return montgomery_sum_from_values(H, table.sieve(H));
}

double mobius_phi_partial_sum(const FieldSpec& field, std::int64_t Y) {
    if (Y < 1) fail(ErrorCode::InvalidArgument, "Y must be >= 1");
    CompensatedSum s;
    for_each_squarefree(enumerate_prime_ideals(field, Y), Y,
                        [&](const SquarefreeIdeal& q) { s.add(1.0 / static_cast<double>(q.phi)); });
    return s.value();
}

}  // namespace singser
