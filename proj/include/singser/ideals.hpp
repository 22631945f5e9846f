#pragma once

// Prime and squarefree ideals of O_K for quadratic K, the arithmetic
// functions mu, phi, N on them, Ramanujan sums over ideals, and the ideal
// lattices Lambda_q = { m(alpha) : alpha in q } used by the lattice
// diagnostics.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "singser/field.hpp"
#include "singser/smoothing.hpp"

namespace singser {

enum class SplitType { Split, Inert, Ramified };

const char* split_type_name(SplitType t);

/// A prime ideal above the rational prime p. For Split and Ramified ideals
/// p = (p, omega - root), and reduction mod p sends k1 + k2*omega to
/// k1 + k2*root in F_p. Inert ideals are (p) with norm p^2.
struct PrimeIdeal {
    std::int64_t p = 0;
    SplitType type = SplitType::Inert;
    std::int64_t norm = 0;
    std::optional<std::int64_t> root;

    /// Ordering by (norm, p, root).
    friend auto operator<=>(const PrimeIdeal& a, const PrimeIdeal& b) {
        if (auto c = a.norm <=> b.norm; c != 0) return c;
        if (auto c = a.p <=> b.p; c != 0) return c;
        return a.root.value_or(-1) <=> b.root.value_or(-1);
    }
    friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) {
        return a.p == b.p && a.type == b.type && a.root == b.root;
    }
};

/// eta in the prime ideal (membership through the mod-p functional).
bool contains(const PrimeIdeal& ideal, QuadInt eta);

/// Splitting of the rational prime p in K (one or two prime ideals).
std::vector<PrimeIdeal> split_prime(const FieldSpec& field, std::int64_t p);

/// Every prime ideal of norm <= Y, sorted by (norm, p, root).
std::vector<PrimeIdeal> enumerate_prime_ideals(const FieldSpec& field, std::int64_t Y);

/// A product of distinct prime ideals.
struct SquarefreeIdeal {
    std::vector<PrimeIdeal> factors;  ///< sorted ascending
    std::int64_t norm = 1;
    int mu = 1;
    std::int64_t phi = 1;

    /// Throws Error{InvalidArgument} on a repeated factor.
    static SquarefreeIdeal from_factors(std::vector<PrimeIdeal> factors);

    bool contains(QuadInt eta) const;
};

/// Squarefree ideals of norm <= Y, generated depth-first over
/// enumerate_prime_ideals(field, Y). Includes the unit ideal.
std::vector<SquarefreeIdeal> enumerate_squarefree_ideals(const FieldSpec& field, std::int64_t Y);

/// Visits every squarefree ideal of norm <= Y built from `primes` (sorted
/// ascending) in depth-first order without materialising the list. The
/// visited object is reused between calls.
void for_each_squarefree(const std::vector<PrimeIdeal>& primes, std::int64_t Y,
                         const std::function<void(const SquarefreeIdeal&)>& visit);

/// All divisors of q, one per subset of its factors (subset bitmask order).
std::vector<SquarefreeIdeal> divisors(const SquarefreeIdeal& q);

/// c_q(eta) = prod over p | q of (N p - 1 if eta in p, else -1).
std::int64_t ramanujan_sum(const SquarefreeIdeal& q, QuadInt eta);

/// sum over d | c of c_d(eta); equals N c when eta in c and 0 otherwise.
std::int64_t condensation_sum(const SquarefreeIdeal& c, QuadInt eta);

/// Lambda_q in Hermite normal form: columns (a, 0) and (b, c) with a, c > 0
/// and 0 <= b < a.
struct IdealLattice {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    std::int64_t det() const { return a * c; }
    QuadInt column(int i) const { return i == 0 ? QuadInt{a, 0} : QuadInt{b, c}; }
    bool contains(QuadInt x) const;

    friend bool operator==(const IdealLattice&, const IdealLattice&) = default;
};

/// HNF of the lattice spanned by two integer column vectors (must be full rank).
IdealLattice hermite_normal_form(QuadInt col0, QuadInt col1);

IdealLattice ideal_lattice(const SquarefreeIdeal& q);

/// Visits the lattice points x with |x1| <= R and |x2| <= R, row by row (x2
/// ascending, then x1 ascending).
void for_each_lattice_point(const IdealLattice& lattice, std::int64_t R,
                            const std::function<void(std::int64_t, std::int64_t)>& visit);

/// Number of nonzero dual-lattice vectors with Euclidean length <= r
/// (closed ball, relative boundary slack 1e-12). Throws
/// Error{BudgetExceeded} when more than `budget` candidates would be scanned.
std::int64_t dual_lattice_count(const IdealLattice& lattice, double r, std::int64_t budget = 100'000'000);

/// Euclidean length of the shortest nonzero dual-lattice vector.
double dual_shortest_length(const IdealLattice& lattice);

/// sum over eta in q of w(m(eta) / H).
double ideal_smoothed_count(const SquarefreeIdeal& q, const TestFunction& w, double H);

/// S_q(H) = sum over eta of c_q(eta) w(m(eta) / H), via Mobius inversion
/// over the divisors of q.
double ramanujan_smoothed_sum(const SquarefreeIdeal& q, const TestFunction& w, double H);

/// Exact integer forms for the square autocorrelation at integer H: both
/// return H^2 times the corresponding real-valued sum.
std::int64_t ideal_smoothed_count_square_exact(const SquarefreeIdeal& q, std::int64_t H);
std::int64_t ramanujan_smoothed_sum_square_exact(const SquarefreeIdeal& q, std::int64_t H);

}  // namespace singser
