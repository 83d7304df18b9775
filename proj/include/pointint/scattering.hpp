#pragma once

// Stationary scattering and bound states for point interactions.
//
// Conventions: incident amplitude 1. For incidence from the left,
//   psi = e^{ikx} + r_left e^{-ikx}  (x < 0),   psi = t_left e^{ikx}  (x > 0);
// for incidence from the right,
//   psi = e^{-ikx} + r_right e^{ikx} (x > 0),  psi = t_right e^{-ikx} (x < 0).

#include <vector>

#include "pointint/bc.hpp"

namespace pointint {

struct ScatteringSolution {
    double k = 0.0;
    Complex r_left, t_left;
    Complex r_right, t_right;

    [[nodiscard]] double unitarity_defect_left() const;
    [[nodiscard]] double unitarity_defect_right() const;
};

struct BoundState {
    double kappa = 0.0;
    double energy = 0.0;  // -kappa^2
    // Boundary values at 0-/0+ of the L2-normalized eigenfunction; left_value
    // is real and positive.
    Complex left_value, right_value;
};

/// Throws SingularInterface when the matching system degenerates at this k.
ScatteringSolution scatter(const BoundaryCondition& bc, double k);

/// All kappa > 0 with b kappa^2 + (a + d) kappa + c = 0, sorted by energy
/// ascending. The phase cancels, so the list depends only on (a, b, c, d).
std::vector<BoundState> bound_states(const BoundaryCondition& bc);

struct ChainSite {
    double position = 0.0;
    BoundaryCondition bc;
};

/// Point interactions at strictly increasing positions.
class InteractionChain {
public:
    InteractionChain() = default;
    explicit InteractionChain(std::vector<ChainSite> sites);

    [[nodiscard]] const std::vector<ChainSite>& sites() const { return sites_; }
    [[nodiscard]] bool empty() const { return sites_.empty(); }

    /// Sub-chain of sites [first, last).
    [[nodiscard]] InteractionChain slice(std::size_t first, std::size_t last) const;

private:
    std::vector<ChainSite> sites_;
};

/// (psi, psi') propagator over a free segment of length `length`.
Mat2 free_transfer(double k, double length);

/// (psi, psi') map from just left of the first site to just right of the
/// last one. Identity for an empty chain.
Mat2 chain_transfer(const InteractionChain& chain, double k);

/// Scattering data of a (psi, psi') transfer matrix spanning [x_left, x_right].
ScatteringSolution transfer_to_scattering(const Mat2& transfer, double x_left, double x_right,
                                          double k);

ScatteringSolution chain_scatter(const InteractionChain& chain, double k);

}  // namespace pointint
