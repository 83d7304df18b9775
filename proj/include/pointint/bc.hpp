#pragma once

// Boundary conditions linking (psi, psi') across a point interaction at the
// origin:
//
//   [psi(+0), psi'(+0)]^T = e^{i phi} [[a, b], [c, d]] [psi(-0), psi'(-0)]^T,
//
// with real a, b, c, d and ad - bc = 1. Units are hbar = 2m = 1 throughout.

#include <span>

#include "pointint/mat2.hpp"

namespace pointint {

inline constexpr double kDeterminantTolerance = 1e-12;

/// Reduces an angle into [0, 2 pi).
double normalize_phase(double phi);

class BoundaryCondition {
public:
    /// Free line: phi = 0, identity matrix part.
    BoundaryCondition() = default;

    [[nodiscard]] double phi() const { return phi_; }
    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double b() const { return b_; }
    [[nodiscard]] double c() const { return c_; }
    [[nodiscard]] double d() const { return d_; }

    /// Same matrix part, different phase.
    [[nodiscard]] BoundaryCondition with_phase(double phi) const;

    [[nodiscard]] bool is_identity_matrix() const {
        return a_ == 1.0 && b_ == 0.0 && c_ == 0.0 && d_ == 1.0;
    }

    friend BoundaryCondition make_bc(double phi, double a, double b, double c, double d);

private:
    BoundaryCondition(double phi, double a, double b, double c, double d)
        : phi_(phi), a_(a), b_(b), c_(c), d_(d) {}

    double phi_ = 0.0;
    double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

/// Validates and normalizes. Throws DeterminantViolation when |ad - bc - 1|
/// exceeds kDeterminantTolerance and ValidationError on non-finite input.
BoundaryCondition make_bc(double phi, double a, double b, double c, double d);

/// Amplitude of a singular gauge field alpha * delta(x) at the origin.
struct GaugeStrength {
    double alpha = 0.0;
};

/// Pure-phase interface with e^{i phi} = (2 + i alpha) / (2 - i alpha).
BoundaryCondition bc_from_gauge_strength(GaugeStrength strength);

/// The unreduced phase 2 atan(alpha / 2), in (-pi, pi).
double unwrapped_gauge_phase(GaugeStrength strength);

/// e^{i phi} [[a, b], [c, d]]; its determinant is e^{2 i phi}.
using InterfaceMatrix = Mat2;

InterfaceMatrix interface_matrix(const BoundaryCondition& bc);

/// Piecewise-constant gauge factor: 1 for x < 0 and amplitude e^{i phi} for
/// x >= 0. Throws ValidationError unless amplitude > 0.
Complex chi_step(double x, double phi, double amplitude = 1.0);

/// Positive amplitude factor and phase equivalent to a possibly negative one:
/// a < 0 becomes |a| with the phase shifted by pi.
struct AmplitudePhase {
    double amplitude;
    double phi;
};
AmplitudePhase canonical_amplitude(double amplitude, double phi);

/// Real gauge-field profile a(x) sampled on a strictly increasing grid.
struct SampledProfile {
    std::span<const double> x;
    std::span<const double> values;
};

/// exp(i Q(x)) with Q the trapezoid integral of the profile from its first
/// sample up to x. Outside the sampled range the profile counts as zero.
Complex smooth_gauge_phase(const SampledProfile& profile, double x);

}  // namespace pointint
