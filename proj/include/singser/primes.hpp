#pragma once

// Prime elements of O_K and 2D prefix grids answering "how many primes, and
// how much 1/log|N| weight, lie in this coordinate box" with four lookups.

#include <cstdint>
#include <string>
#include <vector>

#include "singser/field.hpp"

namespace singser {

/// (alpha) is a prime ideal: |N alpha| is a rational prime, or p^2 with p
/// inert and alpha an associate of p.
bool is_prime_element(const FieldSpec& field, QuadInt alpha);

/// Cumulative tables over the coordinate box [-R, R]^2.
///
/// count(i, j) = #{prime alpha : k1 <= i, k2 <= j} and weight(i, j) is the
/// sum of 1/log|N alpha| over all alpha with |N alpha| > 1 in the same
/// quadrant. Indices below -R read as zero; indices above R are rejected.
class PrefixGrid {
public:
    PrefixGrid(const FieldSpec& field, std::int64_t R);

    const FieldSpec& field() const { return field_; }
    std::int64_t extent() const { return R_; }

    std::uint32_t count(std::int64_t i, std::int64_t j) const { return counts_[index(i, j)]; }
    double weight(std::int64_t i, std::int64_t j) const { return weights_[index(i, j)]; }

    std::uint32_t total_count() const { return count(R_, R_); }
    double total_weight() const { return weight(R_, R_); }

    /// Raw padded tables, (2R+2)^2 row-major with row = k2 + R + 1.
    std::vector<std::uint32_t>& raw_counts() { return counts_; }
    std::vector<double>& raw_weights() { return weights_; }
    const std::vector<std::uint32_t>& raw_counts() const { return counts_; }
    const std::vector<double>& raw_weights() const { return weights_; }

    std::size_t index(std::int64_t i, std::int64_t j) const {
        const std::int64_t side = 2 * R_ + 2;
        return static_cast<std::size_t>((j + R_ + 1) * side + (i + R_ + 1));
    }

private:
    FieldSpec field_;
    std::int64_t R_;
    std::vector<std::uint32_t> counts_;
    std::vector<double> weights_;
};

/// Bytes build_grid allocates for extent R (both tables).
double grid_bytes(std::int64_t R);

/// Scans [-R, R]^2 and accumulates both prefix tables. Throws
/// Error{BudgetExceeded} before allocating more than max_bytes.
PrefixGrid build_grid(const FieldSpec& field, std::int64_t R, unsigned threads = 1,
                      double max_bytes = 3.0e9);

/// Integer corner range [lo, hi] per axis for the closed box of half-width H
/// around x; lo > hi means the box holds no lattice point on that axis.
struct BoxRange {
    std::int64_t lo1, hi1, lo2, hi2;
    bool empty() const { return lo1 > hi1 || lo2 > hi2; }
};
BoxRange box_range(const PrefixGrid& grid, double x1, double x2, double H);

/// #{prime alpha : |k1 - x1| <= H and |k2 - x2| <= H}. Throws
/// Error{OutOfExtent} when the box leaves the grid.
std::int64_t count_primes_box(const PrefixGrid& grid, double x1, double x2, double H);

/// Sum of 1/log|N alpha| over the same box, |N alpha| > 1.
double log_weight_box(const PrefixGrid& grid, double x1, double x2, double H);

/// Little-endian file: "SINF", u32 version, i64 D, u8 basis, u32 R, then the
/// (2R+1)^2 row-major u32 counts and f64 weights for k2, k1 in [-R, R].
void save_grid(const PrefixGrid& grid, const std::string& path);
PrefixGrid load_grid(const std::string& path);

}  // namespace singser
