#include "singser/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/parallel.hpp"

namespace singser {

namespace {

constexpr char kMagic[4] = {'S', 'I', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;

// Norms up to this bound are classified with a byte sieve; beyond it each
// element falls back to Miller-Rabin.
constexpr std::int64_t kSieveLimit = 400'000'000;

bool inert_associate(const FieldSpec& field, QuadInt alpha, std::int64_t p) {
    if (kronecker(field.discriminant(), p) != -1) return false;
    auto q = field.divide_exact(alpha, QuadInt{p, 0});
    return q && field.is_unit(*q);
}

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

// Classifier shared by the scan: primality of |N alpha| comes from the sieve
// when available.
struct Classifier {
    const FieldSpec& field;
    const std::vector<std::uint8_t>* flags;

    bool rational_prime(std::uint64_t m) const {
        if (flags != nullptr && m < flags->size()) return (*flags)[m] != 0;
        return is_prime_u64(m);
    }

    bool operator()(QuadInt alpha, std::uint64_t m) const {
        if (m < 2) return false;
        if (rational_prime(m)) return true;
        const std::uint64_t s = isqrt(m);
        if (s * s != m || !rational_prime(s)) return false;
        return inert_associate(field, alpha, static_cast<std::int64_t>(s));
    }
};

template <class T>
void put(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
        fail(ErrorCode::InvalidArgument, "grid file is truncated");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

bool is_prime_element(const FieldSpec& field, QuadInt alpha) {
    return Classifier{field, nullptr}(alpha, abs_u64(field.norm(alpha)));
}

PrefixGrid::PrefixGrid(const FieldSpec& field, std::int64_t R) : field_(field), R_(R) {
    if (R < 0) fail(ErrorCode::InvalidArgument, "grid extent must be >= 0");
    const auto side = static_cast<std::size_t>(2 * R + 2);
    counts_.assign(side * side, 0);
    weights_.assign(side * side, 0.0);
}

double grid_bytes(std::int64_t R) {
    const double side = 2.0 * static_cast<double>(R) + 2.0;
    return side * side * (sizeof(std::uint32_t) + sizeof(double));
}

PrefixGrid build_grid(const FieldSpec& field, std::int64_t R, unsigned threads, double max_bytes) {
    if (R < 0) fail(ErrorCode::InvalidArgument, "grid extent must be >= 0");
    // Counts are u32: (2R+1)^2 must fit.
    if (R > 32767 || grid_bytes(R) > max_bytes) {
        fail(ErrorCode::BudgetExceeded, "grid of extent " + std::to_string(R) + " needs " +
                                            std::to_string(grid_bytes(R)) + " bytes (budget " +
                                            std::to_string(max_bytes) + ")");
    }
    const std::int64_t max_norm = max_abs_norm_in_box(field, R);
    std::vector<std::uint8_t> flags;
    if (max_norm <= kSieveLimit) flags = prime_flags(static_cast<std::uint64_t>(max_norm));
    const Classifier classify{field, flags.empty() ? nullptr : &flags};

    PrefixGrid grid(field, R);
    auto& counts = grid.raw_counts();
    auto& weights = grid.raw_weights();
    const std::int64_t side = 2 * R + 2;

    // Row pass: each row independently holds its running sums along k1.
    constexpr std::int64_t rows_per_block = 16;
    const std::int64_t rows = 2 * R + 1;
    const auto blocks = static_cast<std::size_t>((rows + rows_per_block - 1) / rows_per_block);
    parallel_blocks(blocks, threads, [&](std::size_t blk) {
        const std::int64_t j_lo = -R + static_cast<std::int64_t>(blk) * rows_per_block;
        const std::int64_t j_hi = std::min(R, j_lo + rows_per_block - 1);
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            std::uint32_t run = 0;
            double sum = 0.0, comp = 0.0;
            for (std::int64_t i = -R; i <= R; ++i) {
                const QuadInt alpha{i, j};
                const std::uint64_t m = abs_u64(field.norm(alpha));
                if (classify(alpha, m)) ++run;
                if (m > 1) {
                    // Kahan step.
                    const double y = 1.0 / std::log(static_cast<double>(m)) - comp;
                    const double t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
                const auto idx = grid.index(i, j);
                counts[idx] = run;
                weights[idx] = sum;
            }
        }
    });

    // Column pass, compensated per column.
    std::vector<double> comp(static_cast<std::size_t>(side), 0.0);
    for (std::int64_t j = -R + 1; j <= R; ++j) {
        for (std::int64_t i = -R; i <= R; ++i) {
            const auto idx = grid.index(i, j), below = grid.index(i, j - 1);
            counts[idx] += counts[below];
            double& c = comp[static_cast<std::size_t>(i + R + 1)];
            const double y = weights[below] - c;
            const double t = weights[idx] + y;
            c = (t - weights[idx]) - y;
            weights[idx] = t;
        }
    }
    return grid;
}

BoxRange box_range(const PrefixGrid& grid, double x1, double x2, double H) {
    if (!(H >= 0.0) || !std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(H)) {
        fail(ErrorCode::InvalidArgument, "box needs finite center and H >= 0");
    }
    BoxRange r{static_cast<std::int64_t>(std::ceil(x1 - H)), static_cast<std::int64_t>(std::floor(x1 + H)),
               static_cast<std::int64_t>(std::ceil(x2 - H)), static_cast<std::int64_t>(std::floor(x2 + H))};
    const std::int64_t R = grid.extent();
    if (x1 - H < -static_cast<double>(R) || x1 + H > static_cast<double>(R) ||
        x2 - H < -static_cast<double>(R) || x2 + H > static_cast<double>(R)) {
        fail(ErrorCode::OutOfExtent, "box around (" + std::to_string(x1) + ", " + std::to_string(x2) +
                                         ") with H = " + std::to_string(H) + " leaves the grid extent " +
                                         std::to_string(R));
    }
    return r;
}

std::int64_t count_primes_box(const PrefixGrid& g, double x1, double x2, double H) {
    const auto r = box_range(g, x1, x2, H);
    if (r.empty()) return 0;
    return static_cast<std::int64_t>(g.count(r.hi1, r.hi2)) - g.count(r.lo1 - 1, r.hi2) -
           g.count(r.hi1, r.lo2 - 1) + g.count(r.lo1 - 1, r.lo2 - 1);
}

double log_weight_box(const PrefixGrid& g, double x1, double x2, double H) {
    const auto r = box_range(g, x1, x2, H);
    if (r.empty()) return 0.0;
    return (g.weight(r.hi1, r.hi2) - g.weight(r.lo1 - 1, r.hi2)) -
           (g.weight(r.hi1, r.lo2 - 1) - g.weight(r.lo1 - 1, r.lo2 - 1));
}

void save_grid(const PrefixGrid& grid, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
    const std::int64_t R = grid.extent();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::int64_t>(os, grid.field().D());
    put<std::uint8_t>(os, grid.field().basis() == BasisKind::Half ? 1 : 0);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(R));
    for (std::int64_t j = -R; j <= R; ++j)
        for (std::int64_t i = -R; i <= R; ++i) put<std::uint32_t>(os, grid.count(i, j));
    for (std::int64_t j = -R; j <= R; ++j)
        for (std::int64_t i = -R; i <= R; ++i) put<double>(os, grid.weight(i, j));
    if (!os) fail(ErrorCode::InvalidArgument, "write to " + path + " failed");
}

PrefixGrid load_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        fail(ErrorCode::InvalidArgument, path + " is not a grid file");
    }
    if (auto v = get<std::uint32_t>(is); v != kVersion) {
        fail(ErrorCode::InvalidArgument, "unsupported grid version " + std::to_string(v));
    }
    const auto D = get<std::int64_t>(is);
    const auto basis = get<std::uint8_t>(is);
    const auto R = static_cast<std::int64_t>(get<std::uint32_t>(is));
    PrefixGrid grid(FieldSpec::make(D, basis ? BasisKind::Half : BasisKind::SqrtD), R);
    for (std::int64_t j = -R; j <= R; ++j)
        for (std::int64_t i = -R; i <= R; ++i) grid.raw_counts()[grid.index(i, j)] = get<std::uint32_t>(is);
    for (std::int64_t j = -R; j <= R; ++j)
        for (std::int64_t i = -R; i <= R; ++i) grid.raw_weights()[grid.index(i, j)] = get<double>(is);
    return grid;
}

}  // namespace singser
