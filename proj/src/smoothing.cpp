#include "singser/smoothing.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "singser/error.hpp"

namespace singser {

using std::numbers::pi;

TestFunction TestFunction::square() { return TestFunction(KernelKind::SquareAutocorr); }
TestFunction TestFunction::disc() { return TestFunction(KernelKind::DiscAutocorr); }
TestFunction TestFunction::triangle() { return TestFunction(KernelKind::Triangle1D); }

TestFunction TestFunction::parse(std::string_view name) {
    if (name == "square") return square();
    if (name == "disc") return disc();
    if (name == "triangle") return triangle();
    fail(ErrorCode::InvalidArgument, "unknown weight '" + std::string(name) + "' (square|disc|triangle)");
}

TestFunction TestFunction::scaled(double c) const {
    TestFunction out = *this;
    out.scale_ *= c;
    return out;
}

std::string TestFunction::name() const {
    switch (kind_) {
        case KernelKind::SquareAutocorr: return "square";
        case KernelKind::DiscAutocorr: return "disc";
        case KernelKind::Triangle1D: return "triangle";
    }
    return "?";
}

double TestFunction::value_at_zero() const {
    switch (kind_) {
        case KernelKind::SquareAutocorr: return scale_ * 4.0;
        case KernelKind::DiscAutocorr: return scale_ * pi;
        case KernelKind::Triangle1D: return scale_ * 1.0;
    }
    return 0.0;
}

double TestFunction::fourier_at_zero() const {
    switch (kind_) {
        case KernelKind::SquareAutocorr: return scale_ * 16.0;
        case KernelKind::DiscAutocorr: return scale_ * pi * pi;
        case KernelKind::Triangle1D: return scale_ * 1.0;
    }
    return 0.0;
}

double TestFunction::support_radius() const {
    return kind_ == KernelKind::Triangle1D ? 1.0 : 2.0;
}

namespace {

double disc_overlap(double r) {
    if (r >= 2.0) return 0.0;
    return 2.0 * std::acos(r / 2.0) - (r / 2.0) * std::sqrt(4.0 - r * r);
}

}  // namespace

double TestFunction::operator()(double x, double y) const {
    switch (kind_) {
        case KernelKind::SquareAutocorr: {
            double a = 2.0 - std::fabs(x), b = 2.0 - std::fabs(y);
            return (a > 0.0 && b > 0.0) ? scale_ * a * b : 0.0;
        }
        case KernelKind::DiscAutocorr:
            return scale_ * disc_overlap(std::hypot(x, y));
        case KernelKind::Triangle1D:
            fail(ErrorCode::InvalidArgument, "triangle weight is one-dimensional");
    }
    return 0.0;
}

double TestFunction::operator()(double t) const {
    if (kind_ != KernelKind::Triangle1D) fail(ErrorCode::InvalidArgument, "two-dimensional weight evaluated at a scalar");
    double a = 1.0 - std::fabs(t);
    return a > 0.0 ? scale_ * a : 0.0;
}

double TestFunction::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
    return x.size() == 1 ? (*this)(x[0]) : (*this)(x[0], x[1]);
}

namespace {

template <unsigned Points, class F>
double composite(F&& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        total += boost::math::quadrature::gauss<double, Points>::integrate(f, a + i * h, a + (i + 1) * h);
    }
    return total;
}

// Two rules of different order on the same panels; the pair gives an error estimate.
template <class F>
FourierValue integrate_pair(F&& f, double a, double b, double frequency, double tol) {
    int panels = std::max(8, static_cast<int>(std::ceil(4.0 * (b - a) * std::fabs(frequency))));
    double coarse = composite<20>(f, a, b, panels);
    double fine = composite<30>(f, a, b, panels);
    double err = std::fabs(fine - coarse);
    if (err > tol * std::max(1.0, std::fabs(fine))) {
        fail(ErrorCode::NonConvergence, "Fourier quadrature did not converge");
    }
    return {fine, err};
}

// 2 * int_0^L cos(2 pi t xi) * (L - t) dt, transform of the 1D tent (L - |t|)_+.
FourierValue tent_transform(double L, double xi, double tol) {
    auto f = [=](double t) { return 2.0 * std::cos(2.0 * pi * t * xi) * (L - t); };
    return integrate_pair(f, 0.0, L, xi, tol);
}

}  // namespace

FourierValue fourier_probe(const TestFunction& w, std::span<const double> xi, double tol) {
    if (static_cast<int>(xi.size()) != w.dimension()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
    double scale = w.scale();
    switch (w.kind()) {
        case KernelKind::Triangle1D: {
            auto v = tent_transform(1.0, xi[0], tol);
            return {scale * v.value, std::fabs(scale) * v.error_estimate};
        }
        case KernelKind::SquareAutocorr: {
            // Separable: the square autocorrelation is a product of two tents.
            auto a = tent_transform(2.0, xi[0], tol);
            auto b = tent_transform(2.0, xi[1], tol);
            double err = std::fabs(a.value) * b.error_estimate + std::fabs(b.value) * a.error_estimate;
            return {scale * a.value * b.value, std::fabs(scale) * err};
        }
        case KernelKind::DiscAutocorr: {
            // Radial: 2 pi int_0^2 w(r) J0(2 pi rho r) r dr, with r = 2 - s^2 so
            // the (2 - r)^{3/2} edge becomes polynomial in s.
            double rho = std::hypot(xi[0], xi[1]);
            auto f = [=](double s) {
                double r = 2.0 - s * s;
                return 2.0 * pi * disc_overlap(r) * std::cyl_bessel_j(0.0, 2.0 * pi * rho * r) * r * 2.0 * s;
            };
            auto v = integrate_pair(f, 0.0, std::sqrt(2.0), 2.0 * rho, tol);
            return {scale * v.value, std::fabs(scale) * v.error_estimate};
        }
    }
    return {0.0, 0.0};
}

}  // namespace singser
