#include "pointint/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pointint/errors.hpp"

namespace pointint {

GridSpec::GridSpec(double x_min, double x_max, std::size_t n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), dx_(0.0) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < 0.0) || !(x_max > 0.0)) {
        throw ValidationError("grid requires x_min < 0 < x_max");
    }
    if (n_cells < 4 || n_cells % 2 != 0) throw ValidationError("grid n_cells must be even and >= 4");
    dx_ = (x_max - x_min) / static_cast<double>(n_cells);
    const double face = x_min + static_cast<double>(n_cells / 2) * dx_;
    if (std::abs(face) > 1e-12 * (x_max - x_min)) {
        throw ValidationError("grid origin must fall on the face between the two middle cells");
    }
}

double l2_norm(const WaveState& state) {
    double sum = 0.0;
    for (const Complex& v : state.values) sum += std::norm(v);
    return std::sqrt(sum * state.grid.dx());
}

double l2_distance(const WaveState& lhs, const WaveState& rhs) {
    if (lhs.values.size() != rhs.values.size()) throw ValidationError("states live on different grids");
    double sum = 0.0;
    for (std::size_t j = 0; j < lhs.values.size(); ++j) sum += std::norm(lhs.values[j] - rhs.values[j]);
    return std::sqrt(sum * lhs.grid.dx());
}

PhaseSchedule PhaseSchedule::constant_rate(double phi0, double rate) {
    if (!std::isfinite(phi0) || !std::isfinite(rate)) throw ValidationError("phase schedule must be finite");
    PhaseSchedule s;
    s.phi0_ = phi0;
    s.rate_ = rate;
    return s;
}

PhaseSchedule PhaseSchedule::tabulated(std::vector<std::pair<double, double>> table) {
    if (table.empty()) throw ValidationError("tabulated phase schedule needs at least one point");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first)) {
            throw ValidationError("phase schedule times must be strictly increasing");
        }
    }
    PhaseSchedule s;
    s.phi0_ = table.front().second;
    s.table_ = std::move(table);
    return s;
}

double PhaseSchedule::at(double t) const {
    if (table_.empty()) return phi0_ + rate_ * t;
    if (t <= table_.front().first) return table_.front().second;
    if (t >= table_.back().first) return table_.back().second;
    auto hi = std::upper_bound(table_.begin(), table_.end(), t,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

WaveState gaussian_packet(const GridSpec& grid, double x0, double k0, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(x0) || !std::isfinite(k0)) {
        throw ValidationError("packet needs finite x0, k0 and sigma > 0");
    }
    if (x0 - 4.0 * sigma < grid.x_min() || x0 + 4.0 * sigma > grid.x_max()) {
        throw PacketOutsideGrid("packet centre +- 4 sigma must lie inside the grid");
    }
    WaveState s{grid, std::vector<Complex>(grid.n_cells()), 0.0};
    for (std::size_t j = 0; j < grid.n_cells(); ++j) {
        const double x = grid.x(j);
        const double u = (x - x0) / (2.0 * sigma);
        s.values[j] = std::polar(std::exp(-u * u), k0 * x);
    }
    const double n = l2_norm(s);
    for (auto& v : s.values) v /= n;
    return s;
}

WaveState apply_gauge(const WaveState& state, double phi) {
    WaveState out = state;
    const Complex f = std::polar(1.0, phi);
    for (std::size_t j = state.grid.origin_index(); j < out.values.size(); ++j) out.values[j] *= f;
    return out;
}

double reflection_probability(const WaveState& state) {
    double left = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < state.values.size(); ++j) {
        const double p = std::norm(state.values[j]);
        total += p;
        if (j < state.grid.origin_index()) left += p;
    }
    return total > 0.0 ? left / total : 0.0;
}

namespace {

// Tridiagonal operator: diag[j], lower[j] couples j to j-1, upper[j] couples j
// to j+1.
struct Tridiagonal {
    std::vector<Complex> lower, diag, upper;

    explicit Tridiagonal(std::size_t n) : lower(n), diag(n), upper(n) {}

    [[nodiscard]] std::size_t size() const { return diag.size(); }
};

// -d^2/dx^2 with hard walls (ghost = -psi at the outer faces) plus a real
// diagonal potential.
Tridiagonal free_hamiltonian(const GridSpec& grid) {
    const std::size_t n = grid.n_cells();
    const double inv = 1.0 / (grid.dx() * grid.dx());
    Tridiagonal h(n);
    for (std::size_t j = 0; j < n; ++j) {
        h.diag[j] = 2.0 * inv;
        if (j > 0) h.lower[j] = -inv;
        if (j + 1 < n) h.upper[j] = -inv;
    }
    h.diag[0] = 3.0 * inv;
    h.diag[n - 1] = 3.0 * inv;
    return h;
}

// Ghost values across the origin, eliminated with the interface condition
// applied to the second-order face values
//   psi(-0) = (u + gL)/2, psi'(-0) = (gL - u)/dx,
//   psi(+0) = (gR + v)/2, psi'(+0) = (v - gR)/dx,
// where u, v are the cells adjacent to the origin and gL, gR continue the
// left/right solutions one cell across it. Returns gL = lu u + lv v and
// gR = ru u + rv v.
struct GhostCoefficients {
    Complex lu, lv, ru, rv;
};

GhostCoefficients interface_ghosts(const InterfaceMatrix& m, double dx) {
    // columns: face values in terms of (u, gL) and (gR, v)
    const Complex a_u0 = 0.5, a_u1 = -1.0 / dx;  // u
    const Complex a_g0 = 0.5, a_g1 = 1.0 / dx;   // gL
    const Complex b_g0 = 0.5, b_g1 = -1.0 / dx;  // gR
    const Complex b_v0 = 0.5, b_v1 = 1.0 / dx;   // v
    // M applied to the u and gL columns
    const Complex mu0 = m.m00 * a_u0 + m.m01 * a_u1, mu1 = m.m10 * a_u0 + m.m11 * a_u1;
    const Complex mg0 = m.m00 * a_g0 + m.m01 * a_g1, mg1 = m.m10 * a_g0 + m.m11 * a_g1;
    // b_g gR - mg gL = mu u - b_v v
    const Mat2 g{b_g0, -mg0, b_g1, -mg1};
    const Complex det = g.det();
    const double scale = std::max({std::abs(g.m00), std::abs(g.m01), std::abs(g.m10), std::abs(g.m11)});
    if (std::abs(det) <= 1e-14 * scale * scale) {
        throw SingularInterface("interface discretization is singular for this grid spacing");
    }
    const Mat2 gi = g.inverse();
    GhostCoefficients out;
    out.ru = gi.m00 * mu0 + gi.m01 * mu1;
    out.lu = gi.m10 * mu0 + gi.m11 * mu1;
    out.rv = -(gi.m00 * b_v0 + gi.m01 * b_v1);
    out.lv = -(gi.m10 * b_v0 + gi.m11 * b_v1);
    return out;
}

// Replaces the two rows adjacent to the origin with the interface stencil.
void couple_interface(Tridiagonal& h, const GridSpec& grid, const InterfaceMatrix& m) {
    const std::size_t iv = grid.origin_index();
    const std::size_t iu = iv - 1;
    const double inv = 1.0 / (grid.dx() * grid.dx());
    const GhostCoefficients g = interface_ghosts(m, grid.dx());
    // row u: -(u_{-2} - 2u + gL)/dx^2
    h.diag[iu] = (2.0 - g.lu) * inv;
    h.upper[iu] = -g.lv * inv;
    // row v: -(gR - 2v + v_{+1})/dx^2
    h.diag[iv] = (2.0 - g.rv) * inv;
    h.lower[iv] = -g.ru * inv;
}

// One Crank-Nicolson step (1 + i dt/2 H) psi' = (1 - i dt/2 H) psi, in place.
// `scratch` and `c_prime` avoid per-step allocation.
void crank_nicolson_step(const Tridiagonal& h, double dt, std::vector<Complex>& psi,
                         std::vector<Complex>& rhs, std::vector<Complex>& c_prime) {
    const std::size_t n = h.size();
    const Complex w(0.0, 0.5 * dt);
    for (std::size_t j = 0; j < n; ++j) {
        Complex hv = h.diag[j] * psi[j];
        if (j > 0) hv += h.lower[j] * psi[j - 1];
        if (j + 1 < n) hv += h.upper[j] * psi[j + 1];
        rhs[j] = psi[j] - w * hv;
    }
    // Thomas algorithm on 1 + w H
    Complex denom = 1.0 + w * h.diag[0];
    c_prime[0] = w * h.upper[0] / denom;
    psi[0] = rhs[0] / denom;
    for (std::size_t j = 1; j < n; ++j) {
        const Complex low = w * h.lower[j];
        denom = 1.0 + w * h.diag[j] - low * c_prime[j - 1];
        c_prime[j] = (j + 1 < n) ? w * h.upper[j] / denom : Complex{};
        psi[j] = (rhs[j] - low * psi[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) psi[j] -= c_prime[j] * psi[j + 1];
}

void validate_stepping(double dt, std::size_t n_steps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
    if (n_steps == 0) throw ValidationError("n_steps must be positive");
}

// Runs n_steps with a Hamiltonian supplied per step midpoint time.
template <class HamiltonianAt>
Evolution run(const WaveState& initial, double dt, std::size_t n_steps, const EvolveOptions& options,
              HamiltonianAt&& hamiltonian_at) {
    validate_stepping(dt, n_steps);
    if (initial.values.size() != initial.grid.n_cells()) {
        throw ValidationError("state size does not match its grid");
    }
    Evolution out{initial, false, 0.0, 0.0};
    const double dx = initial.grid.dx();
    out.cfl_warning = dt / (dx * dx) > kCflWarningRatio;
    const double norm0 = l2_norm(initial);

    WaveState& s = out.state;
    const std::size_t n = s.values.size();
    std::vector<Complex> rhs(n), c_prime(n);
    const bool observing = options.observer && options.observe_stride > 0;
    if (observing) options.observer(s);

    const double t0 = initial.time;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t_mid = t0 + (static_cast<double>(step) + 0.5) * dt;
        crank_nicolson_step(hamiltonian_at(t_mid), dt, s.values, rhs, c_prime);
        s.time = t0 + static_cast<double>(step + 1) * dt;

        const double edge = std::max(std::norm(s.values.front()), std::norm(s.values.back()));
        out.max_boundary_density = std::max(out.max_boundary_density, edge);
        if (edge > options.boundary_density_limit) {
            std::ostringstream msg;
            msg << "wave reached the outer wall at t = " << s.time << " (edge density " << edge
                << " > " << options.boundary_density_limit << ")";
            throw BoundaryReached(msg.str());
        }
        if (observing && ((step + 1) % options.observe_stride == 0 || step + 1 == n_steps)) {
            options.observer(s);
        }
    }
    out.norm_drift = std::abs(l2_norm(s) - norm0);
    return out;
}

}  // namespace

Evolution evolve_interface(const WaveState& state, const BoundaryCondition& bc_base,
                           const PhaseSchedule& schedule, double dt, std::size_t n_steps,
                           const EvolveOptions& options) {
    if (options.interface_amplitude != 1.0) {
        throw NonUnitaryBC("interface amplitude factors other than 1 do not conserve the norm");
    }
    const GridSpec& grid = state.grid;
    Tridiagonal h = free_hamiltonian(grid);
    // the matrix part is fixed; only the phase (a global factor on M) varies
    return run(state, dt, n_steps, options, [&](double t_mid) -> const Tridiagonal& {
        couple_interface(h, grid, interface_matrix(bc_base.with_phase(schedule.at(t_mid))));
        return h;
    });
}

Evolution evolve_step_potential(const WaveState& state, double h, double dt, std::size_t n_steps,
                                const EvolveOptions& options) {
    if (!std::isfinite(h)) throw ValidationError("step height must be finite");
    const GridSpec& grid = state.grid;
    Tridiagonal ham = free_hamiltonian(grid);
    for (std::size_t j = grid.origin_index(); j < grid.n_cells(); ++j) ham.diag[j] += h;
    return run(state, dt, n_steps, options, [&](double) -> const Tridiagonal& { return ham; });
}

EquivalenceReport equivalence_run(const EquivalenceParams& p) {
    const WaveState initial = gaussian_packet(p.grid, p.x0, p.k0, p.sigma);
    EvolveOptions options;
    options.boundary_density_limit = p.boundary_density_limit;

    // i dpsi/dt = -psi'' with phase phi(t) gauges to the potential phi'(t) Theta(x)
    const PhaseSchedule schedule = PhaseSchedule::constant_rate(0.0, p.h);
    const Evolution interface = evolve_interface(initial, BoundaryCondition{}, schedule, p.dt,
                                                 p.n_steps, options);
    const Evolution step = evolve_step_potential(initial, p.h, p.dt, p.n_steps, options);
    const Evolution free = evolve_step_potential(initial, 0.0, p.dt, p.n_steps, options);

    const double t_final = interface.state.time;
    EquivalenceReport r;
    r.l2_distance = l2_distance(apply_gauge(interface.state, -schedule.at(t_final)), step.state);
    r.reflection_interface = reflection_probability(interface.state);
    r.reflection_step = reflection_probability(step.state);
    r.reflection_free = reflection_probability(free.state);
    r.norm_drift_interface = interface.norm_drift;
    r.norm_drift_step = step.norm_drift;
    r.norm_drift_free = free.norm_drift;
    r.max_boundary_density = std::max({interface.max_boundary_density, step.max_boundary_density,
                                       free.max_boundary_density});
    r.final_time = t_final;
    return r;
}

}  // namespace pointint
