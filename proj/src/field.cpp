#include "singser/field.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "singser/arith.hpp"
#include "singser/error.hpp"

namespace singser {

std::int64_t sup_norm(QuadInt a) {
    return std::max(std::llabs(a.k1), std::llabs(a.k2));
}

std::int64_t half_basis_sup_norm(std::int64_t twice_a, std::int64_t twice_b) {
    // |a - b| = |2a - 2b| / 2 and |2b|; both integral when 2a = 2b mod 2.
    return std::max(std::llabs(twice_a - twice_b) / 2, std::llabs(twice_b));
}

FieldSpec::FieldSpec(std::int64_t D, BasisKind basis) : D_(D), basis_(basis) {
    if (basis == BasisKind::Half) {
        disc_ = D;
        trace_ = 1;
        constant_ = (D - 1) / 4;
    } else {
        disc_ = 4 * D;
        trace_ = 0;
        constant_ = D;
    }
}

FieldSpec FieldSpec::make(std::int64_t D, BasisKind basis) {
    if (D == 0 || D == 1) fail(ErrorCode::InvalidArgument, "D must be nonzero and != 1");
    if (std::llabs(D) > (std::int64_t{1} << 40)) fail(ErrorCode::InvalidArgument, "|D| too large");
    if (!is_squarefree(D)) fail(ErrorCode::InvalidArgument, "D must be squarefree");
    if (basis == BasisKind::Half && mod_floor(D, 4) != 1) {
        fail(ErrorCode::InvalidArgument, "half basis requires D = 1 mod 4");
    }
    if (basis == BasisKind::SqrtD && mod_floor(D, 4) == 1) {
        // Z[sqrt D] is not the maximal order here; the ideal theory assumes O_K.
        fail(ErrorCode::InvalidArgument, "D = 1 mod 4 requires the half basis (append ',half')");
    }
    return FieldSpec(D, basis);
}

FieldSpec FieldSpec::maximal(std::int64_t D) {
    return make(D, mod_floor(D, 4) == 1 ? BasisKind::Half : BasisKind::SqrtD);
}

FieldSpec FieldSpec::parse(std::string_view text) {
    auto bad = [&] { fail(ErrorCode::InvalidArgument, "bad field spec '" + std::string(text) + "', expected D=<int>[,half]"); };
    if (text.substr(0, 2) != "D=") bad();
    std::string_view rest = text.substr(2);
    bool half = false;
    if (auto comma = rest.find(','); comma != std::string_view::npos) {
        if (rest.substr(comma + 1) != "half") bad();
        half = true;
        rest = rest.substr(0, comma);
    }
    std::int64_t D = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), D);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) bad();
    return make(D, half ? BasisKind::Half : BasisKind::SqrtD);
}

std::string FieldSpec::to_string() const {
    return "D=" + std::to_string(D_) + (basis_ == BasisKind::Half ? ",half" : "");
}

std::int64_t FieldSpec::norm(QuadInt a) const {
    // N(k1 + k2 w) = k1^2 + t k1 k2 - c k2^2 with w^2 = t w + c.
    i128 k1 = a.k1, k2 = a.k2;
    return narrow_checked(k1 * k1 + trace_ * k1 * k2 - i128{constant_} * k2 * k2);
}

QuadInt FieldSpec::add(QuadInt a, QuadInt b) const {
    return {checked_add(a.k1, b.k1), checked_add(a.k2, b.k2)};
}

QuadInt FieldSpec::sub(QuadInt a, QuadInt b) const {
    return {checked_sub(a.k1, b.k1), checked_sub(a.k2, b.k2)};
}

QuadInt FieldSpec::neg(QuadInt a) const { return {checked_sub(0, a.k1), checked_sub(0, a.k2)}; }

QuadInt FieldSpec::mul(QuadInt a, QuadInt b) const {
    i128 x1 = a.k1, x2 = a.k2, y1 = b.k1, y2 = b.k2;
    i128 k1 = x1 * y1 + i128{constant_} * x2 * y2;
    i128 k2 = x1 * y2 + x2 * y1 + i128{trace_} * x2 * y2;
    return {narrow_checked(k1), narrow_checked(k2)};
}

QuadInt FieldSpec::conjugate(QuadInt a) const {
    // conj(w) = t - w
    return {narrow_checked(i128{a.k1} + i128{trace_} * a.k2), checked_sub(0, a.k2)};
}

std::optional<QuadInt> FieldSpec::divide_exact(QuadInt b, QuadInt a) const {
    if (a.k1 == 0 && a.k2 == 0) fail(ErrorCode::InvalidArgument, "division by zero");
    i128 n = norm(a);
    QuadInt ca = conjugate(a);
    i128 x1 = b.k1, x2 = b.k2, y1 = ca.k1, y2 = ca.k2;
    i128 k1 = x1 * y1 + i128{constant_} * x2 * y2;
    i128 k2 = x1 * y2 + x2 * y1 + i128{trace_} * x2 * y2;
    if (k1 % n != 0 || k2 % n != 0) return std::nullopt;
    return QuadInt{narrow_checked(k1 / n), narrow_checked(k2 / n)};
}

bool FieldSpec::is_unit(QuadInt a) const {
    std::int64_t n = norm(a);
    return n == 1 || n == -1;
}

std::pair<std::int64_t, std::int64_t> FieldSpec::sqrt_coords_doubled(QuadInt a) const {
    if (basis_ == BasisKind::Half) {
        return {checked_add(checked_mul(2, a.k1), a.k2), a.k2};
    }
    return {checked_mul(2, a.k1), checked_mul(2, a.k2)};
}

std::int64_t max_abs_norm_in_box(const FieldSpec& field, std::int64_t R) {
    const i128 r2 = i128{R} * R;
    const i128 coeff = 1 + i128{std::abs(field.omega_trace())} + i128{std::abs(field.omega_constant())};
    const i128 bound = r2 * coeff;
    const i128 cap = std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(bound > cap ? cap : bound);
}

}  // namespace singser
