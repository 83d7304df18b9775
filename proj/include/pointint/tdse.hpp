#pragma once

// Time-dependent Schrodinger evolution i dpsi/dt = -d^2 psi/dx^2 (+ V psi) on
// a symmetric interval with hard walls, discretized by Crank-Nicolson on a
// cell-centred grid whose origin is a cell face.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pointint/bc.hpp"

namespace pointint {

class GridSpec {
public:
    /// Throws ValidationError unless x_min < 0 < x_max, n_cells is even and
    /// positive, and the origin falls on the face between cells n/2 - 1, n/2.
    GridSpec(double x_min, double x_max, std::size_t n_cells);

    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] std::size_t n_cells() const { return n_cells_; }
    [[nodiscard]] double dx() const { return dx_; }
    /// Index of the first cell with x >= 0.
    [[nodiscard]] std::size_t origin_index() const { return n_cells_ / 2; }
    /// Centre of cell j.
    [[nodiscard]] double x(std::size_t j) const {
        return x_min_ + (static_cast<double>(j) + 0.5) * dx_;
    }

private:
    double x_min_, x_max_;
    std::size_t n_cells_;
    double dx_;
};

struct WaveState {
    GridSpec grid;
    std::vector<Complex> values;  // one per cell centre
    double time = 0.0;
};

/// sqrt(sum |psi_j|^2 dx), the norm conserved by the discrete evolution.
double l2_norm(const WaveState& state);

/// l2_norm(lhs - rhs); grids must agree.
double l2_distance(const WaveState& lhs, const WaveState& rhs);

/// Phase of the interface as a function of time.
class PhaseSchedule {
public:
    /// phi(t) = phi0 + rate t, evaluated exactly.
    static PhaseSchedule constant_rate(double phi0, double rate);

    /// Linear interpolation through (time, phase) pairs with strictly
    /// increasing times; held constant outside the table.
    static PhaseSchedule tabulated(std::vector<std::pair<double, double>> table);

    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double phi0() const { return phi0_; }
    [[nodiscard]] double rate() const { return rate_; }
    [[nodiscard]] bool is_tabulated() const { return !table_.empty(); }

private:
    double phi0_ = 0.0;
    double rate_ = 0.0;
    std::vector<std::pair<double, double>> table_;
};

/// Normalized packet proportional to exp(-(x - x0)^2 / (4 sigma^2)) e^{i k0 x}.
/// Throws PacketOutsideGrid unless [x0 - 4 sigma, x0 + 4 sigma] lies inside.
WaveState gaussian_packet(const GridSpec& grid, double x0, double k0, double sigma);

struct EvolveOptions {
    /// BoundaryReached is thrown once |psi|^2 in an outermost cell exceeds
    /// this value.
    double boundary_density_limit = 1e-8;
    /// Multiplicative amplitude of the interface factor; anything but 1 is
    /// rejected with NonUnitaryBC.
    double interface_amplitude = 1.0;
    /// Called with the initial state and then every `observe_stride` steps
    /// (and after the last step). 0 disables observation.
    std::size_t observe_stride = 0;
    std::function<void(const WaveState&)> observer;
};

struct Evolution {
    WaveState state;
    bool cfl_warning = false;  // dt / dx^2 > 10
    double max_boundary_density = 0.0;
    double norm_drift = 0.0;  // |final norm - initial norm|
};

inline constexpr double kCflWarningRatio = 10.0;

/// Free evolution on both half-lines coupled at the origin by the interface
/// condition with phase schedule(t + dt/2) during each step. The matrix part
/// of bc_base is kept fixed; its phase is replaced by the schedule.
Evolution evolve_interface(const WaveState& state, const BoundaryCondition& bc_base,
                           const PhaseSchedule& schedule, double dt, std::size_t n_steps,
                           const EvolveOptions& options = {});

/// Evolution with the step potential h Theta(x), Theta(0) = 1.
Evolution evolve_step_potential(const WaveState& state, double h, double dt, std::size_t n_steps,
                                const EvolveOptions& options = {});

/// Multiplies cells with x >= 0 by e^{i phi}.
WaveState apply_gauge(const WaveState& state, double phi);

/// Fraction of |psi|^2 carried by cells with x < 0.
double reflection_probability(const WaveState& state);

struct EquivalenceParams {
    GridSpec grid{-80.0, 80.0, 4096};
    double x0 = -40.0;
    double k0 = 1.0;
    double sigma = 4.0;
    double h = 4.0;
    double dt = 5e-3;
    std::size_t n_steps = 8000;
    double boundary_density_limit = 1e-8;
};

struct EquivalenceReport {
    double l2_distance = 0.0;
    double reflection_interface = 0.0;
    double reflection_step = 0.0;
    double reflection_free = 0.0;
    double norm_drift_interface = 0.0;
    double norm_drift_step = 0.0;
    double norm_drift_free = 0.0;
    double max_boundary_density = 0.0;  // over all three runs
    double final_time = 0.0;
};

/// Evolves one packet (i) through the pure-phase interface with
/// phi(t) = h t, (ii) under the step potential h Theta(x), and (iii) freely,
/// then compares (ii) with the gauge-transformed (i) at the final time.
EquivalenceReport equivalence_run(const EquivalenceParams& params);

}  // namespace pointint
