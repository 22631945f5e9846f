#pragma once

// Truncated singular series over quadratic fields and over Z, the residue
// of the Dedekind zeta function at s = 1, and the smoothed sums of
// (S(eta) - 1) whose log H growth these tools measure.

#include <cstdint>
#include <string>
#include <vector>

#include "singser/field.hpp"
#include "singser/ideals.hpp"
#include "singser/smoothing.hpp"

namespace singser {

struct ResidueValue {
    double value = 0.0;
    double error_bound = 0.0;
    std::string method;
    std::int64_t terms = 0;  ///< number of L-series terms summed explicitly
};

/// Res_{s=1} zeta_K(s) = L(1, chi_{d_K}), summed over full periods of the
/// Kronecker character with an Euler-Maclaurin tail and a rigorous bound.
/// Throws Error{BudgetExceeded} when tol needs more than max_terms terms.
ResidueValue residue_rk(const FieldSpec& field, double tol, std::int64_t max_terms = 2'000'000'000);

/// A truncated product together with a multiplicative error bound: the full
/// product lies in [value (1 - tail_bound), value (1 + tail_bound)].
struct SingularValue {
    double value = 0.0;
    std::int64_t cutoff = 0;
    double tail_bound = 0.0;
};

/// Relative tail bound for an element whose norm has absolute value
/// `abs_norm`, truncated at prime ideals of norm <= P.
double singular_tail_bound(std::int64_t P, std::int64_t abs_norm);

/// Prime-ideal data for evaluating S(eta) truncated at norm P.
///
/// Every truncated value is computed in one canonical floating order:
///   (norm-2 factors: 2 if eta in p, else 0) * base * prod corrections
/// where base = prod over 2 < N p <= P of (1 - 2/Np)/(1 - 1/Np)^2 (ascending
/// norm) and a correction (Np - 1)/(Np - 2) is applied, in ascending ideal
/// order, for each prime ideal of norm > 2 that contains eta. The sieved
/// box uses the same order, which makes the two paths bit-identical.
class SingularSeriesTable {
public:
    SingularSeriesTable(const FieldSpec& field, std::int64_t P);

    const FieldSpec& field() const { return field_; }
    std::int64_t cutoff() const { return cutoff_; }
    const std::vector<PrimeIdeal>& ideals() const { return ideals_; }
    double base() const { return base_; }

    /// (Np - 1)/(Np - 2) for ideal i (norm > 2).
    double correction(std::size_t i) const;

    SingularValue evaluate(QuadInt eta) const;

    /// Literal Euler product over ideals of norm <= P in ascending order;
    /// agrees with evaluate() up to rounding.
    double euler_product(QuadInt eta) const;

    /// Indices (ascending) of the table ideals containing eta.
    std::vector<std::size_t> containing_ideals(QuadInt eta) const;

private:
    FieldSpec field_;
    std::int64_t cutoff_;
    std::vector<PrimeIdeal> ideals_;
    std::vector<std::int64_t> rational_primes_;               // distinct p, ascending
    std::vector<std::pair<std::size_t, std::size_t>> ranges_;  // ideals above rational_primes_[i]
    double base_ = 1.0;
};

/// S(eta) truncated at P. Rejects eta = 0 and P < 2.
SingularValue singular_series(const FieldSpec& field, QuadInt eta, std::int64_t P);

/// Same canonical scheme over Z: 2-factor, base over odd p <= P, then
/// corrections (p - 1)/(p - 2) for odd p | h in ascending order.
class RationalSingularTable {
public:
    explicit RationalSingularTable(std::int64_t P);

    std::int64_t cutoff() const { return cutoff_; }
    const std::vector<std::int64_t>& primes() const { return primes_; }
    double base() const { return base_; }

    SingularValue evaluate(std::int64_t h) const;
    double euler_product(std::int64_t h) const;

    /// S(h) for h = 1..H by the multiplicative sieve; entry h - 1 is S(h).
    std::vector<double> sieve(std::int64_t H) const;

private:
    std::int64_t cutoff_;
    std::vector<std::int64_t> primes_;
    double base_ = 1.0;
};

SingularValue singular_series_rational(std::int64_t h, std::int64_t P);

/// Sieved S(eta) over the coordinate box |k1|, |k2| <= H.
struct SingularBox {
    std::int64_t H = 0;
    std::int64_t cutoff = 0;
    double tail_bound = 0.0;     ///< uniform relative bound for every entry
    std::vector<double> values;  ///< row-major, (2H+1)^2; the origin entry is NaN

    double at(std::int64_t k1, std::int64_t k2) const {
        const std::int64_t side = 2 * H + 1;
        return values[static_cast<std::size_t>((k2 + H) * side + (k1 + H))];
    }
};

/// Throws Error{BudgetExceeded} before allocating more than max_entries.
SingularBox sieved_singular_box(const SingularSeriesTable& table, std::int64_t H, unsigned threads = 1,
                                std::int64_t max_entries = 200'000'000);

struct SmoothedSum {
    double H = 0.0;
    double sum = 0.0;
    double uncertainty = 0.0;  ///< accumulated tail uncertainty
    std::int64_t terms = 0;
};

/// sum over nonzero eta of (S(eta) - 1) w(m(eta)/H), using entries of an
/// existing box (box.H must cover the support of w at this H).
SmoothedSum singular_sum_from_box(const SingularBox& box, const TestFunction& w, double H);

/// Builds the box and evaluates the smoothed sum.
SmoothedSum singular_sum_smoothed(const SingularSeriesTable& table, const TestFunction& w, double H,
                                  unsigned threads = 1);

/// sum_{h=1}^{H} (S(h) - 1)(1 - h/H).
double montgomery_sum(std::int64_t H, const RationalSingularTable& table);

/// Same sum from precomputed sieve values (values[h-1] = S(h), size >= H).
double montgomery_sum_from_values(std::int64_t H, const std::vector<double>& values);

/// sum over squarefree q with N q <= Y of 1/phi(q), including q = (1).
double mobius_phi_partial_sum(const FieldSpec& field, std::int64_t Y);

}  // namespace singser
