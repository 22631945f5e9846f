#include "singser/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "singser/arith.hpp"
#include "singser/error.hpp"

namespace singser {

const char* split_type_name(SplitType t) {
    switch (t) {
        case SplitType::Split: return "split";
        case SplitType::Inert: return "inert";
        case SplitType::Ramified: return "ramified";
    }
    return "?";
}

bool contains(const PrimeIdeal& ideal, QuadInt eta) {
    if (ideal.type == SplitType::Inert) {
        return eta.k1 % ideal.p == 0 && eta.k2 % ideal.p == 0;
    }
    i128 v = i128{eta.k1} + i128{eta.k2} * *ideal.root;
    return v % ideal.p == 0;
}

namespace {

// Roots of the minimal polynomial x^2 - t x - c of omega modulo p, ascending.
std::vector<std::int64_t> omega_roots_mod(const FieldSpec& field, std::int64_t p) {
    std::int64_t t = mod_floor(field.omega_trace(), p);
    std::int64_t c = mod_floor(field.omega_constant(), p);
    std::vector<std::int64_t> roots;
    if (p == 2) {
        for (std::int64_t r = 0; r < 2; ++r) {
            if (mod_floor(r * r - t * r - c, 2) == 0) roots.push_back(r);
        }
        return roots;
    }
    // r = (t +- s) / 2 with s^2 = t^2 + 4c = d_K (mod p).
    std::int64_t inv2 = (p + 1) / 2;
    for (std::int64_t s : sqrt_mod_prime(mod_floor(field.discriminant(), p), p)) {
        roots.push_back(static_cast<std::int64_t>(mul_mod(mod_floor(t + s, p), inv2, p)));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

std::vector<PrimeIdeal> split_prime(const FieldSpec& field, std::int64_t p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p))) {
        fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    }
    int symbol = kronecker(field.discriminant(), p);
    if (symbol == -1) {
        return {PrimeIdeal{p, SplitType::Inert, checked_mul(p, p), std::nullopt}};
    }
    auto roots = omega_roots_mod(field, p);
    if (symbol == 0) {
        if (roots.size() != 1) fail(ErrorCode::InvalidArgument, "ramified prime without a double root");
        return {PrimeIdeal{p, SplitType::Ramified, p, roots[0]}};
    }
    if (roots.size() != 2) fail(ErrorCode::InvalidArgument, "split prime without two roots");
    return {PrimeIdeal{p, SplitType::Split, p, roots[0]}, PrimeIdeal{p, SplitType::Split, p, roots[1]}};
}

std::vector<PrimeIdeal> enumerate_prime_ideals(const FieldSpec& field, std::int64_t Y) {
    std::vector<PrimeIdeal> out;
    if (Y < 2) return out;
    for (std::int64_t p : primes_up_to(Y)) {
        if (kronecker(field.discriminant(), p) == -1 && p > Y / p) continue;
        for (auto& ideal : split_prime(field, p)) {
            if (ideal.norm <= Y) out.push_back(ideal);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SquarefreeIdeal SquarefreeIdeal::from_factors(std::vector<PrimeIdeal> factors) {
    std::sort(factors.begin(), factors.end());
    SquarefreeIdeal q;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0 && factors[i] == factors[i - 1]) {
            fail(ErrorCode::InvalidArgument, "repeated prime factor in squarefree ideal");
        }
        q.norm = checked_mul(q.norm, factors[i].norm);
        q.phi = checked_mul(q.phi, factors[i].norm - 1);
        q.mu = -q.mu;
    }
    q.factors = std::move(factors);
    return q;
}

bool SquarefreeIdeal::contains(QuadInt eta) const {
    // Distinct prime ideals are coprime, so the product is the intersection.
    return std::all_of(factors.begin(), factors.end(),
                       [&](const PrimeIdeal& p) { return singser::contains(p, eta); });
}

void for_each_squarefree(const std::vector<PrimeIdeal>& primes, std::int64_t Y,
                         const std::function<void(const SquarefreeIdeal&)>& visit) {
    if (Y < 1) return;
    SquarefreeIdeal current;
    std::function<void(std::size_t)> descend = [&](std::size_t start) {
        visit(current);
        for (std::size_t i = start; i < primes.size(); ++i) {
            const PrimeIdeal& p = primes[i];
            if (p.norm > Y / current.norm) break;
            current.factors.push_back(p);
            current.norm *= p.norm;
            current.phi *= p.norm - 1;
            current.mu = -current.mu;
            descend(i + 1);
            current.mu = -current.mu;
            current.phi /= p.norm - 1;
            current.norm /= p.norm;
            current.factors.pop_back();
        }
    };
    descend(0);
}

std::vector<SquarefreeIdeal> enumerate_squarefree_ideals(const FieldSpec& field, std::int64_t Y) {
    std::vector<SquarefreeIdeal> out;
    for_each_squarefree(enumerate_prime_ideals(field, Y), Y,
                        [&](const SquarefreeIdeal& q) { out.push_back(q); });
    return out;
}

std::vector<SquarefreeIdeal> divisors(const SquarefreeIdeal& q) {
    const std::size_t k = q.factors.size();
    if (k > 30) fail(ErrorCode::BudgetExceeded, "too many prime factors");
    std::vector<SquarefreeIdeal> out;
    out.reserve(std::size_t{1} << k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<PrimeIdeal> subset;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) subset.push_back(q.factors[i]);
        }
        out.push_back(SquarefreeIdeal::from_factors(std::move(subset)));
    }
    return out;
}

std::int64_t ramanujan_sum(const SquarefreeIdeal& q, QuadInt eta) {
    std::int64_t value = 1;
    for (const auto& p : q.factors) {
        value = checked_mul(value, contains(p, eta) ? p.norm - 1 : -1);
    }
    return value;
}

std::int64_t condensation_sum(const SquarefreeIdeal& c, QuadInt eta) {
    std::int64_t total = 0;
    for (const auto& d : divisors(c)) total = checked_add(total, ramanujan_sum(d, eta));
    return total;
}

bool IdealLattice::contains(QuadInt x) const {
    if (x.k2 % c != 0) return false;
    i128 y = x.k2 / c;
    return (i128{x.k1} - i128{b} * y) % a == 0;
}

IdealLattice hermite_normal_form(QuadInt col0, QuadInt col1) {
    // Extended gcd on the second row, then reduce the first row.
    i128 y0 = col0.k2, y1 = col1.k2;
    i128 old_r = y0, r = y1, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    i128 g = old_r;
    if (g < 0) {
        g = -g;
        old_s = -old_s;
        old_t = -old_t;
    }
    if (g == 0) fail(ErrorCode::InvalidArgument, "lattice generators are not full rank");
    i128 x_top = old_s * col0.k1 + old_t * col1.k1;            // second row equals g
    i128 x_zero = (y1 / g) * col0.k1 - (y0 / g) * col1.k1;     // second row equals 0
    if (x_zero < 0) x_zero = -x_zero;
    if (x_zero == 0) fail(ErrorCode::InvalidArgument, "lattice generators are not full rank");
    IdealLattice L;
    L.a = narrow_checked(x_zero);
    L.c = narrow_checked(g);
    i128 b = x_top % x_zero;
    if (b < 0) b += x_zero;
    L.b = narrow_checked(b);
    return L;
}

IdealLattice ideal_lattice(const SquarefreeIdeal& q) {
    IdealLattice L;
    for (const auto& ideal : q.factors) {
        const std::int64_t p = ideal.p;
        QuadInt c0 = L.column(0), c1 = L.column(1);
        if (ideal.type == SplitType::Inert) {
            L = hermite_normal_form({checked_mul(p, c0.k1), checked_mul(p, c0.k2)},
                                    {checked_mul(p, c1.k1), checked_mul(p, c1.k2)});
            continue;
        }
        // Kernel of z -> f(z0 c0 + z1 c1) mod p, f(x) = x1 + root * x2.
        auto f = [&](QuadInt x) {
            return static_cast<std::int64_t>(mod_floor(narrow_checked((i128{x.k1} + i128{x.k2} * *ideal.root) % p), p));
        };
        std::int64_t u = f(c0), v = f(c1);
        QuadInt z0, z1;
        if (v != 0) {
            std::int64_t w = mod_floor(-narrow_checked(i128{u} * *inv_mod(v, p) % p), p);
            z0 = {1, w};
            z1 = {0, p};
        } else if (u != 0) {
            z0 = {p, 0};
            z1 = {0, 1};
        } else {
            continue;
        }
        auto combine = [&](QuadInt z) {
            return QuadInt{narrow_checked(i128{z.k1} * c0.k1 + i128{z.k2} * c1.k1),
                           narrow_checked(i128{z.k1} * c0.k2 + i128{z.k2} * c1.k2)};
        };
        L = hermite_normal_form(combine(z0), combine(z1));
    }
    if (L.det() != q.norm) fail(ErrorCode::InvalidArgument, "ideal lattice determinant does not match the norm");
    return L;
}

void for_each_lattice_point(const IdealLattice& L, std::int64_t R,
                            const std::function<void(std::int64_t, std::int64_t)>& visit) {
    for (std::int64_t y = ceil_div(-R, L.c); y <= floor_div(R, L.c); ++y) {
        const std::int64_t x2 = L.c * y;
        const std::int64_t shift = checked_mul(L.b, y);
        for (std::int64_t u = ceil_div(-R - shift, L.a); u <= floor_div(R - shift, L.a); ++u) {
            visit(shift + L.a * u, x2);
        }
    }
}

std::int64_t dual_lattice_count(const IdealLattice& L, double r, std::int64_t budget) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
    // Dual vectors are B^{-T} w = (c w1, a w2 - b w1) / (a c) for w in Z^2.
    using ld = long double;
    const ld a = L.a, b = L.b, c = L.c;
    const ld rac = static_cast<ld>(r) * a * c;
    const ld bound2 = rac * rac * (1.0L + 1e-12L);
    const ld w1_max_real = std::sqrt(bound2) / c;
    const ld w2_span = 2.0L * std::sqrt(bound2) / a + 1.0L;
    if ((2.0L * w1_max_real + 1.0L) * w2_span > static_cast<ld>(budget)) {
        fail(ErrorCode::BudgetExceeded, "dual lattice enumeration exceeds budget");
    }
    const auto w1_max = static_cast<std::int64_t>(std::floor(w1_max_real));
    std::int64_t count = 0;
    for (std::int64_t w1 = -w1_max; w1 <= w1_max; ++w1) {
        const ld cw = c * w1;
        const ld rest = bound2 - cw * cw;
        if (rest < 0) continue;
        const ld s = std::sqrt(rest);
        const auto lo = static_cast<std::int64_t>(std::ceil((b * w1 - s) / a)) - 1;
        const auto hi = static_cast<std::int64_t>(std::floor((b * w1 + s) / a)) + 1;
        for (std::int64_t w2 = lo; w2 <= hi; ++w2) {
            if (w1 == 0 && w2 == 0) continue;
            const ld e = a * w2 - b * w1;
            if (cw * cw + e * e <= bound2) ++count;
        }
    }
    return count;
}

double dual_shortest_length(const IdealLattice& L) {
    // Lagrange-Gauss reduction of the dual basis scaled by a*c to integers:
    // (c, -b) and (0, a).
    i128 u1 = L.c, u2 = -L.b, v1 = 0, v2 = L.a;
    auto dot = [](i128 x1, i128 x2, i128 y1, i128 y2) { return x1 * y1 + x2 * y2; };
    if (dot(u1, u2, u1, u2) > dot(v1, v2, v1, v2)) {
        std::swap(u1, v1);
        std::swap(u2, v2);
    }
    while (true) {
        const i128 uu = dot(u1, u2, u1, u2);
        const i128 uv = dot(u1, u2, v1, v2);
        // nearest integer to uv / uu
        i128 m = (2 * uv + uu) / (2 * uu);
        if (2 * uv + uu < 0 && (2 * uv + uu) % (2 * uu) != 0) --m;
        v1 -= m * u1;
        v2 -= m * u2;
        if (dot(v1, v2, v1, v2) >= uu) break;
        std::swap(u1, v1);
        std::swap(u2, v2);
    }
    const long double len = std::sqrt(static_cast<long double>(dot(u1, u2, u1, u2)));
    return static_cast<double>(len / (static_cast<long double>(L.a) * L.c));
}

double ideal_smoothed_count(const SquarefreeIdeal& q, const TestFunction& w, double H) {
    if (!(H > 0.0)) fail(ErrorCode::InvalidArgument, "H must be positive");
    const IdealLattice L = ideal_lattice(q);
    const auto R = static_cast<std::int64_t>(std::floor(w.support_radius() * H));
    double total = 0.0;
    for_each_lattice_point(L, R, [&](std::int64_t x1, std::int64_t x2) {
        total += w(static_cast<double>(x1) / H, static_cast<double>(x2) / H);
    });
    return total;
}

double ramanujan_smoothed_sum(const SquarefreeIdeal& q, const TestFunction& w, double H) {
    double total = 0.0;
    const std::size_t k = q.factors.size();
    for (const auto& b : divisors(q)) {
        const int mu_a = ((k - b.factors.size()) % 2 == 0) ? 1 : -1;
        total += mu_a * static_cast<double>(b.norm) * ideal_smoothed_count(b, w, H);
    }
    return total;
}

std::int64_t ideal_smoothed_count_square_exact(const SquarefreeIdeal& q, std::int64_t H) {
    if (H < 1) fail(ErrorCode::InvalidArgument, "H must be a positive integer");
    const IdealLattice L = ideal_lattice(q);
    const std::int64_t R = 2 * H;
    std::int64_t total = 0;
    for_each_lattice_point(L, R, [&](std::int64_t x1, std::int64_t x2) {
        total = checked_add(total, checked_mul(R - std::llabs(x1), R - std::llabs(x2)));
    });
    return total;
}

std::int64_t ramanujan_smoothed_sum_square_exact(const SquarefreeIdeal& q, std::int64_t H) {
    std::int64_t total = 0;
    const std::size_t k = q.factors.size();
    for (const auto& b : divisors(q)) {
        const std::int64_t mu_a = ((k - b.factors.size()) % 2 == 0) ? 1 : -1;
        total = checked_add(total, checked_mul(mu_a * b.norm, ideal_smoothed_count_square_exact(b, H)));
    }
    return total;
}

}  // namespace singser
