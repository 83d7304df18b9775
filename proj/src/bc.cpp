#include "pointint/bc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pointint/errors.hpp"

namespace pointint {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double normalize_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2 pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

BoundaryCondition BoundaryCondition::with_phase(double phi) const {
    return BoundaryCondition(normalize_phase(phi), a_, b_, c_, d_);
}

BoundaryCondition make_bc(double phi, double a, double b, double c, double d) {
    for (double v : {phi, a, b, c, d}) {
        if (!std::isfinite(v)) throw ValidationError("boundary condition parameters must be finite");
    }
    const double det = a * d - b * c;
    if (std::abs(det - 1.0) > kDeterminantTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "boundary condition determinant ad - bc = " << det << " differs from 1";
        throw DeterminantViolation(msg.str());
    }
    return BoundaryCondition(normalize_phase(phi), a, b, c, d);
}

double unwrapped_gauge_phase(GaugeStrength strength) {
    return 2.0 * std::atan(strength.alpha / 2.0);
}

BoundaryCondition bc_from_gauge_strength(GaugeStrength strength) {
    if (!std::isfinite(strength.alpha)) throw ValidationError("gauge strength must be finite");
    const Complex ratio = Complex(2.0, strength.alpha) / Complex(2.0, -strength.alpha);
    return make_bc(std::arg(ratio), 1.0, 0.0, 0.0, 1.0);
}

InterfaceMatrix interface_matrix(const BoundaryCondition& bc) {
    const Complex s = std::polar(1.0, bc.phi());
    return {s * bc.a(), s * bc.b(), s * bc.c(), s * bc.d()};
}

Complex chi_step(double x, double phi, double amplitude) {
    if (!(amplitude > 0.0)) throw ValidationError("chi_step amplitude must be positive");
    if (x < 0.0) return {1.0, 0.0};
    return std::polar(amplitude, phi);
}

AmplitudePhase canonical_amplitude(double amplitude, double phi) {
    if (amplitude == 0.0 || !std::isfinite(amplitude)) {
        throw ValidationError("amplitude factor must be finite and nonzero");
    }
    if (amplitude < 0.0) return {-amplitude, normalize_phase(phi + std::numbers::pi)};
    return {amplitude, normalize_phase(phi)};
}

Complex smooth_gauge_phase(const SampledProfile& profile, double x) {
    const auto& xs = profile.x;
    const auto& fs = profile.values;
    if (xs.size() != fs.size()) throw ValidationError("profile grid and values differ in length");
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double x0 = xs[i];
        const double x1 = xs[i + 1];
        if (!(x1 > x0)) throw ValidationError("profile grid must be strictly increasing");
        if (x <= x0) break;
        if (x >= x1) {
            q += 0.5 * (fs[i] + fs[i + 1]) * (x1 - x0);
        } else {
            // partial cell: trapezoid against the linear interpolant
            const double fx = fs[i] + (fs[i + 1] - fs[i]) * (x - x0) / (x1 - x0);
            q += 0.5 * (fs[i] + fx) * (x - x0);
            break;
        }
    }
    return std::polar(1.0, q);
}

}  // namespace pointint
