#include "singser/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "singser/error.hpp"

namespace singser {

std::int64_t narrow_checked(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        fail(ErrorCode::Overflow, "integer result exceeds 64 bits");
    }
    return static_cast<std::int64_t>(v);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::Overflow, "addition overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::Overflow, "subtraction overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::Overflow, "multiplication overflow");
    return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::optional<std::int64_t> inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = mod_floor(a, m), r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) return std::nullopt;
    return mod_floor(old_s, m);
}

namespace {

bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // These twelve bases are sufficient for n < 3.3e24.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!strong_probable_prime(n, a)) return false;
    }
    return true;
}

std::uint64_t isqrt(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_squarefree(std::int64_t n) {
    std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    if (m == 0) return false;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return false;
        }
    }
    return true;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n <= 0) fail(ErrorCode::InvalidArgument, "kronecker symbol needs n >= 1");
    int result = 1;
    // Factor out powers of two from n using (a | 2).
    while ((n & 1) == 0) {
        n >>= 1;
        if ((a & 1) == 0) return 0;
        std::int64_t r8 = mod_floor(a, 8);
        if (r8 == 3 || r8 == 5) result = -result;
    }
    // Jacobi symbol (a | n) for odd n.
    std::int64_t x = mod_floor(a, n);
    std::int64_t m = n;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            std::int64_t r8 = m % 8;
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(x, m);
        if (x % 4 == 3 && m % 4 == 3) result = -result;
        x %= m;
    }
    return m == 1 ? result : 0;
}

std::vector<std::int64_t> sqrt_mod_prime(std::int64_t a, std::int64_t p) {
    a = mod_floor(a, p);
    if (p == 2) return {a};
    if (a == 0) return {0};
    auto up = static_cast<std::uint64_t>(p);
    auto ua = static_cast<std::uint64_t>(a);
    if (pow_mod(ua, (up - 1) / 2, up) != 1) return {};

    // Tonelli-Shanks.
    std::uint64_t q = up - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (pow_mod(z, (up - 1) / 2, up) != up - 1) ++z;
    std::uint64_t c = pow_mod(z, q, up);
    std::uint64_t x = pow_mod(ua, (q + 1) / 2, up);
    std::uint64_t t = pow_mod(ua, q, up);
    int m = s;
    while (t != 1) {
        int i = 0;
        std::uint64_t tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, up);
            ++i;
        }
        std::uint64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, up);
        x = mul_mod(x, b, up);
        c = mul_mod(b, b, up);
        t = mul_mod(t, c, up);
        m = i;
    }
    auto r1 = static_cast<std::int64_t>(x);
    auto r2 = p - r1;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

std::vector<std::uint8_t> prime_flags(std::uint64_t limit) {
    std::vector<std::uint8_t> flags(limit + 1, 1);
    flags[0] = 0;
    if (limit >= 1) flags[1] = 0;
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (!flags[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) flags[j] = 0;
    }
    return flags;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
    std::vector<std::int64_t> out;
    if (limit < 2) return out;
    auto flags = prime_flags(static_cast<std::uint64_t>(limit));
    for (std::int64_t n = 2; n <= limit; ++n) {
        if (flags[n]) out.push_back(n);
    }
    return out;
}

}  // namespace singser
