#pragma once

#include <cmath>
#include <complex>

namespace operlab {

using cplx = std::complex<double>;

// A point of the universal cover of C*: modulus plus a continuous argument.
// All non-integer powers are taken through this representation so that
// branch choices are explicit and continuous along paths.
struct CoverPoint {
    double mod = 1.0;
    double arg = 0.0;

    CoverPoint() = default;
    CoverPoint(double m, double a) : mod(m), arg(a) {}

    static CoverPoint principal(cplx z) { return {std::abs(z), std::arg(z)}; }

    // Lift z to the sheet whose argument is closest to `near_arg`.
    static CoverPoint lift_near(cplx z, double near_arg) {
        double a = std::arg(z);
        double turns = std::round((near_arg - a) / (2.0 * M_PI));
        return {std::abs(z), a + 2.0 * M_PI * turns};
    }

    cplx value() const { return std::polar(mod, arg); }
    cplx log() const { return {std::log(mod), arg}; }
    cplx pow(cplx e) const { return std::exp(e * log()); }
    cplx pow(double e) const { return std::polar(std::pow(mod, e), e * arg); }

    CoverPoint rotated(double angle) const { return {mod, arg + angle}; }
    CoverPoint scaled(double f) const { return {mod * f, arg}; }
    CoverPoint power(double e) const { return {std::pow(mod, e), arg * e}; }
    CoverPoint operator*(const CoverPoint& o) const { return {mod * o.mod, arg + o.arg}; }
};

}  // namespace operlab
