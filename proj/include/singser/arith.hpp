#pragma once

// Rational-integer helpers shared by the field, ideal and prime modules.

#include <cstdint>
#include <optional>
#include <vector>

namespace singser {

using i128 = __int128;

/// Throws Error{Overflow} when v does not fit in int64_t.
std::int64_t narrow_checked(i128 v);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
/// Nonnegative residue of a mod m (m > 0).
std::int64_t mod_floor(std::int64_t a, std::int64_t m);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
/// Modular inverse of a mod m, or nullopt when gcd(a, m) != 1.
std::optional<std::int64_t> inv_mod(std::int64_t a, std::int64_t m);

/// Deterministic strong-pseudoprime test, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n);

bool is_squarefree(std::int64_t n);

/// Kronecker symbol (a | n) for n >= 1.
int kronecker(std::int64_t a, std::int64_t n);

/// All square roots of a modulo the prime p, ascending (0, 1 or 2 values).
std::vector<std::int64_t> sqrt_mod_prime(std::int64_t a, std::int64_t p);

/// Eratosthenes sieve: flags[n] != 0 iff n is prime, for 0 <= n <= limit.
std::vector<std::uint8_t> prime_flags(std::uint64_t limit);

/// Primes up to and including limit, ascending.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

}  // namespace singser
