#pragma once

// Bethe-Ansatz (McGuire) eigenfunctions of N equal particles on a line with
// pairwise point interactions.
//
// Wall conditions live on the hyperplanes x_i = x_j, written in the Jacobi
// coordinate x_ij = sqrt(2) (x_i - x_j) for i < j. The derivative
// d/dx_ij is taken at fixed pair centre of mass and spectators, i.e.
// d/dx_ij = (d/dx_i - d/dx_j) / (2 sqrt(2)). The common-coupling walls are
//
//   psi(+0) = psi(-0),   dpsi/dx_ij(+0) = c psi(-0) + dpsi/dx_ij(-0),
//
// and the extended family multiplies the right-hand sides by a_ij e^{i phi_ij}.
// In the original variables the common-coupling walls are the potential
// 2 sqrt(2) c delta(x_i - x_j) added to -sum_i d^2/dx_i^2.
//
// Particles, positions and momenta are 0-based in code. Permutation strings
// ("132") are 1-based: sector "213" is x_2 < x_1 < x_3, and plane wave "132"
// is exp(i (k_1 x_1 + k_3 x_2 + k_2 x_3)).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pointint/mat2.hpp"

namespace pointint::fewbody {

inline constexpr int kMaxParticles = 6;
inline constexpr double kMomentumGap = 1e-9;
inline constexpr double kConsistencyTolerance = 1e-8;
inline constexpr double kWallTolerance = 1e-12;

using Permutation = std::vector<int>;

std::string to_string(const Permutation& p);
/// Parses a 1-based digit string; throws ValidationError unless it is a
/// permutation of 1..n.
Permutation parse_permutation(const std::string& text, int n);

std::size_t factorial(int n);

/// Lexicographic rank of a permutation of 0..n-1.
std::size_t permutation_rank(const Permutation& p);

/// All permutations of 0..n-1 in lexicographic order.
std::vector<Permutation> all_permutations(int n);

/// Pairwise distinct real momenta (gap > kMomentumGap).
class Momenta {
public:
    explicit Momenta(std::vector<double> k);

    [[nodiscard]] const std::vector<double>& values() const { return k_; }
    [[nodiscard]] int size() const { return static_cast<int>(k_.size()); }
    /// Sum of k_i^2. (A cubic term appearing in one printed three-body
    /// formula is read as a misprint for the square.)
    [[nodiscard]] double energy() const;

private:
    std::vector<double> k_;
};

/// A hyperplane x_i = x_j separating two adjacent sectors. On the `minus`
/// sector side x_i < x_j (i < j), i.e. x_ij < 0.
struct Wall {
    std::size_t minus;
    std::size_t plus;
    int i;
    int j;
    int position;  // the pair occupies ordering slots position, position + 1
};

struct SectorGraph {
    int n = 0;
    /// sectors[s][m] is the particle in ordering slot m.
    std::vector<Permutation> sectors;
    std::vector<Wall> walls;
    /// wall indices bounding each sector
    std::vector<std::vector<std::size_t>> sector_walls;

    [[nodiscard]] std::size_t index_of(const Permutation& ordering) const {
        return permutation_rank(ordering);
    }
};

/// All N! orderings and their walls. Throws NTooLarge beyond kMaxParticles
/// and ValidationError below 2.
SectorGraph sectors(int n);

/// Sum over sectors Q and permutations P of A(Q, P) exp(i sum_l k_{P(l)} x_l),
/// each term active inside its own sector. Momenta are complex so that
/// bound states (imaginary momenta) share the representation.
class PlaneWaveEigenfunction {
public:
    PlaneWaveEigenfunction(std::vector<Complex> momenta, double c);

    [[nodiscard]] int n() const { return static_cast<int>(momenta_.size()); }
    [[nodiscard]] const std::vector<Complex>& momenta() const { return momenta_; }
    [[nodiscard]] double coupling() const { return c_; }
    [[nodiscard]] Complex energy() const;

    [[nodiscard]] Complex amplitude(std::size_t sector, std::size_t perm) const {
        return amplitudes_[sector * n_perms_ + perm];
    }
    void set_amplitude(std::size_t sector, std::size_t perm, Complex value) {
        amplitudes_[sector * n_perms_ + perm] = value;
    }
    [[nodiscard]] std::size_t permutation_count() const { return n_perms_; }

    /// Max absolute residual of the amplitude system this function was
    /// solved from; 0 for closed-form constructions.
    [[nodiscard]] double consistency_residual() const { return residual_; }
    void set_consistency_residual(double r) { residual_ = r; }

    /// Value and d/dx_ij of sector `sector`'s plane-wave sum at `point`
    /// (analytic continuation, so it is defined up to and on the walls).
    struct SectorLimit {
        Complex value;
        Complex d_jacobi;
    };
    [[nodiscard]] SectorLimit sector_limit(std::size_t sector, std::span<const double> point, int i,
                                           int j) const;

private:
    std::vector<Complex> momenta_;
    double c_;
    std::size_t n_perms_;
    std::vector<Permutation> perms_;
    std::vector<Complex> amplitudes_;
    double residual_ = 0.0;
};

/// Scattering eigenfunction with a single incoming plane wave: the one with
/// momentum assignment `incoming`, in the sector where it is fully incoming
/// (momenta decreasing along the ordering), with amplitude 1. Throws
/// InconsistentSystem if the least-squares residual exceeds
/// kConsistencyTolerance.
PlaneWaveEigenfunction solve_amplitudes(const Momenta& momenta, double c, const Permutation& incoming);

/// Index of the sector in which plane wave `perm` is fully incoming.
std::size_t incoming_sector(std::span<const double> momenta, const Permutation& perm);

/// Common coupling plus an amplitude a_ij > 0 and phase phi_ij per pair i < j
/// (pairs in lexicographic order).
class PairParams {
public:
    PairParams(int n, double c, std::vector<double> amplitudes, std::vector<double> phases);

    /// a_ij = 1, phi_ij = 0.
    static PairParams uniform(int n, double c);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] double coupling() const { return c_; }
    [[nodiscard]] double amplitude(int i, int j) const { return amplitudes_[pair_index(i, j)]; }
    [[nodiscard]] double phase(int i, int j) const { return phases_[pair_index(i, j)]; }
    [[nodiscard]] const std::vector<double>& amplitudes() const { return amplitudes_; }
    [[nodiscard]] const std::vector<double>& phases() const { return phases_; }
    /// 2 C(N, 2) + 1
    [[nodiscard]] std::size_t parameter_count() const { return 2 * amplitudes_.size() + 1; }

    [[nodiscard]] std::size_t pair_index(int i, int j) const;

private:
    int n_;
    double c_;
    std::vector<double> amplitudes_;
    std::vector<double> phases_;
};

/// (prod_{i<j} chi_ij) psi: amplitudes in every sector with x_i > x_j pick up
/// a_ij e^{i phi_ij}. The coupling of params must equal psi's.
PlaneWaveEigenfunction apply_pair_gauge(const PlaneWaveEigenfunction& psi, const PairParams& params);

/// Throws OnWall within kWallTolerance of any x_i = x_j.
Complex evaluate(const PlaneWaveEigenfunction& psi, std::span<const double> point);

/// Max discrepancy of the extended wall conditions over `wall_samples`
/// random points on every wall, from exact one-sided limits.
double bc_residual(const PlaneWaveEigenfunction& psi, const PairParams& params, int wall_samples,
                   std::uint64_t seed = 0x5eed);

struct GroundState {
    int n;
    double beta;    // psi = exp(-beta sum_{i<j} |x_i - x_j|)
    double energy;  // -beta^2 N (N^2 - 1) / 3
    PlaneWaveEigenfunction eigenfunction;
};

/// Fully bound state of the attractive system. Throws NotAttractive for
/// c >= 0.
GroundState ground_state(int n, double c);

}  // namespace pointint::fewbody
