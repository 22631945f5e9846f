#pragma once

// Mean and variance of prime counts in short coordinate boxes over O_K, and
// the rational baseline (prime counts and von Mangoldt sums in short
// intervals of the integers).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "singser/field.hpp"
#include "singser/primes.hpp"

namespace singser {

enum class SamplerKind {
    Exhaustive,        ///< every integer center in [-X, X]^2
    StratifiedJitter,  ///< one uniform point per q x q sub-cell of each unit cell
};

struct Sampler {
    SamplerKind kind = SamplerKind::Exhaustive;
    int subdivisions = 4;
    std::uint64_t seed = 0;

    static Sampler exhaustive() { return {}; }
    static Sampler jitter(int subdivisions, std::uint64_t seed) {
        return {SamplerKind::StratifiedJitter, subdivisions, seed};
    }
    /// "exhaustive" or "jitter[:q]"; the seed is supplied separately.
    static Sampler parse(std::string_view text, std::uint64_t seed = 0);
    std::string name() const;
};

/// Per-center moments of pi_K and of the weighted approximation
/// A(x) = (1/r_K) sum 1/log|N alpha|.
struct SampleStats {
    std::int64_t n = 0;
    double E = 0.0;           ///< mean pi_K(x; H)
    double V = 0.0;           ///< mean (pi_K - A)^2
    double V_expanded = 0.0;  ///< mean pi^2 - 2 mean pi A + mean A^2
    double mean_A = 0.0;
};

/// Requires grid extent >= X + H (Error{OutOfExtent} otherwise).
SampleStats sample_statistics(const PrefixGrid& grid, double X, double H, const Sampler& sampler, double rK,
                              unsigned threads = 1);

double expectation_E(const PrefixGrid& grid, double X, double H, const Sampler& sampler, unsigned threads = 1);
double variance_V(const PrefixGrid& grid, double X, double H, const Sampler& sampler, double rK,
                  unsigned threads = 1);

/// vol(B_H) / (r_K log vol(B_X)) = (2H)^2 / (r_K log (2X)^2).
double expected_primes_reference(double X, double H, double rK);

struct VarianceRow {
    double delta = 0.0;
    double H = 0.0;
    double E = 0.0;
    double V = 0.0;
    double ratio = 0.0;
    double target = 0.0;
    std::int64_t n_samples = 0;
};

/// Grid extent used by variance_profile: ceil(X + X^max_delta) + 2.
std::int64_t profile_extent(double X, const std::vector<double>& deltas);

/// One row per delta with H = X^delta, all read from a single grid.
std::vector<VarianceRow> variance_rows(const PrefixGrid& grid, double X, const std::vector<double>& deltas,
                                       const Sampler& sampler, double rK, unsigned threads = 1);

struct VarianceProfile {
    std::vector<VarianceRow> rows;
    double rK = 0.0;
    double rK_error = 0.0;
    std::int64_t extent = 0;
};

/// Builds the grid, computes r_K at residue_tol, and fills the rows.
VarianceProfile variance_profile(const FieldSpec& field, double X, const std::vector<double>& deltas,
                                 const Sampler& sampler, unsigned threads = 1, double residue_tol = 1e-8);

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Prefix tables over 0..N for the integer baseline: prime counts, sums of
/// 1/log n (n >= 2), Chebyshev psi, and the prime-power weights 1/k at p^k,
/// k >= 2.
class RationalTables {
public:
    explicit RationalTables(std::int64_t N);

    std::int64_t limit() const { return N_; }
    /// #{p <= n}
    std::int64_t pi(std::int64_t n) const { return pi_[at(n)]; }
    /// sum_{2 <= m <= n} 1/log m
    double li(std::int64_t n) const { return li_[at(n)]; }
    /// sum_{m <= n} Lambda(m)
    double psi(std::int64_t n) const { return psi_[at(n)]; }
    /// sum over p^k <= n, k >= 2, of 1/k
    double prime_powers(std::int64_t n) const { return pp_[at(n)]; }
    double lambda(std::int64_t n) const;

private:
    std::size_t at(std::int64_t n) const;

    std::int64_t N_;
    std::vector<std::int64_t> pi_;
    std::vector<double> li_, psi_, pp_;
};

/// E_N(X; H): mean over integer x in [0, X) of pi(x; H) = #{x < p <= x + H}.
double expectation_rational(std::int64_t X, std::int64_t H);
double expectation_rational(const RationalTables& t, std::int64_t X, std::int64_t H);

/// V_N(X; H) = (1/X) integral_0^X (pi(x; H) - sum_{x < n <= x+H, n >= 2} 1/log n)^2 dx,
/// exact for integer H since the integrand is constant on [k, k+1).
double variance_rational_prime(std::int64_t X, std::int64_t H);
double variance_rational_prime(const RationalTables& t, std::int64_t X, std::int64_t H);

/// (1/X) sum_{k < X} (psi(k + H) - psi(k) - H)^2.
double variance_rational_lambda(std::int64_t X, std::int64_t H);
double variance_rational_lambda(const RationalTables& t, std::int64_t X, std::int64_t H);

/// sum over prime powers p^k in (x, x + H], k >= 2, of 1/k.
double prime_power_correction(double x, double H);

/// max over integer x in [2, X] of prime_power_correction(x, H) / (H x^{-1/2}).
double prime_power_correction_constant(std::int64_t X, std::int64_t H);

struct ZBaselineRow {
    std::int64_t X = 0;
    std::int64_t H = 0;
    double delta = 0.0;
    double E = 0.0;
    double V_prime = 0.0;
    double V_lambda = 0.0;
    double ratio_prime = 0.0;   ///< V_prime / ((1 - delta) E)
    double ratio_lambda = 0.0;  ///< V_lambda / (H (log X - log H))
};

/// H = round(X^delta).
ZBaselineRow z_baseline(std::int64_t X, double delta);

}  // namespace singser
