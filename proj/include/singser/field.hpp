#pragma once

// Quadratic fields Q(sqrt D), their rings of integers, and the coordinate
// embedding m(alpha) = (k1, k2) with respect to a fixed integral basis {1, omega}.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace singser {

enum class BasisKind {
    SqrtD,  ///< omega = sqrt(D)
    Half,   ///< omega = (1 + sqrt(D)) / 2, needs D = 1 mod 4
};

/// Element k1 + k2*omega of O_K, stored by its integral-basis coordinates.
/// The owning field is passed explicitly to every arithmetic operation.
struct QuadInt {
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;

    friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

/// Sup norm max(|k1|, |k2|) in integral-basis coordinates.
std::int64_t sup_norm(QuadInt a);

/// Sup norm of a + b*sqrt(D) written in the half-integral form used for
/// Half fields: max(|a - b|, |2b|). Arguments are 2a and 2b.
std::int64_t half_basis_sup_norm(std::int64_t twice_a, std::int64_t twice_b);

class FieldSpec {
public:
    /// Validates D (squarefree, nonzero, != 1) and the basis choice.
    static FieldSpec make(std::int64_t D, BasisKind basis);

    /// Parses `D=<int>[,half]`.
    static FieldSpec parse(std::string_view text);

    /// Q(sqrt D) with its maximal order: Half when D = 1 mod 4, else SqrtD.
    static FieldSpec maximal(std::int64_t D);

    std::int64_t D() const { return D_; }
    BasisKind basis() const { return basis_; }
    std::int64_t discriminant() const { return disc_; }
    int degree() const { return 2; }

    /// omega^2 = trace * omega + constant.
    std::int64_t omega_trace() const { return trace_; }
    std::int64_t omega_constant() const { return constant_; }

    /// The spec string this field parses from, e.g. "D=5,half".
    std::string to_string() const;

    std::int64_t norm(QuadInt a) const;
    QuadInt add(QuadInt a, QuadInt b) const;
    QuadInt sub(QuadInt a, QuadInt b) const;
    QuadInt neg(QuadInt a) const;
    QuadInt mul(QuadInt a, QuadInt b) const;
    QuadInt conjugate(QuadInt a) const;

    /// b / a when it lies in O_K, nullopt otherwise. Throws on a == 0.
    std::optional<QuadInt> divide_exact(QuadInt b, QuadInt a) const;

    bool is_unit(QuadInt a) const;

    /// Doubled sqrt-form coordinates (A, B) with a = (A + B*sqrt(D)) / 2.
    std::pair<std::int64_t, std::int64_t> sqrt_coords_doubled(QuadInt a) const;

    friend bool operator==(const FieldSpec& x, const FieldSpec& y) {
        return x.D_ == y.D_ && x.basis_ == y.basis_;
    }

private:
    FieldSpec(std::int64_t D, BasisKind basis);

    std::int64_t D_;
    BasisKind basis_;
    std::int64_t disc_;
    std::int64_t trace_;
    std::int64_t constant_;
};

/// Upper bound on |N(alpha)| over the box |k1|, |k2| <= R (saturates at
/// INT64_MAX).
std::int64_t max_abs_norm_in_box(const FieldSpec& field, std::int64_t R);

}  // namespace singser
