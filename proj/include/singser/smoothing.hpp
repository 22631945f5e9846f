#pragma once

// Compactly supported test weights w = 1_U * 1_U (autocorrelations of a
// symmetric convex body U) plus the 1D triangle used for the Z baseline.

#include <span>
#include <string>
#include <string_view>

namespace singser {

enum class KernelKind {
    SquareAutocorr,  ///< U = [-1, 1]^2, w(x) = prod (2 - |x_i|)_+
    DiscAutocorr,    ///< U = Euclidean unit disc
    Triangle1D,      ///< w(t) = (1 - |t|)_+
};

class TestFunction {
public:
    static TestFunction square();
    static TestFunction disc();
    static TestFunction triangle();
    /// "square", "disc" or "triangle".
    static TestFunction parse(std::string_view name);

    /// c * w; c = 0 gives the zero weight.
    TestFunction scaled(double c) const;

    KernelKind kind() const { return kind_; }
    int dimension() const { return kind_ == KernelKind::Triangle1D ? 1 : 2; }
    std::string name() const;
    double scale() const { return scale_; }

    /// w(0) = c * vol(U).
    double value_at_zero() const;
    /// w^(0) = integral of w = c * vol(U)^2.
    double fourier_at_zero() const;
    /// w vanishes outside this radius (sup norm for square and triangle,
    /// Euclidean for disc).
    double support_radius() const;

    double operator()(double x, double y) const;
    double operator()(double t) const;
    double eval(std::span<const double> x) const;

private:
    explicit TestFunction(KernelKind kind) : kind_(kind) {}

    KernelKind kind_;
    double scale_ = 1.0;
};

struct FourierValue {
    double value;
    double error_estimate;
};

/// w^(xi) = integral of e(-x.xi) w(x) dx by composite Gauss-Legendre
/// quadrature. w is even, so the transform is real. Throws
/// Error{NonConvergence} when two rules of different order disagree by more
/// than tol (relative to max(1, |value|)).
FourierValue fourier_probe(const TestFunction& w, std::span<const double> xi, double tol = 1e-9);

}  // namespace singser
