#include "pointint/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointint/errors.hpp"

namespace pointint {

namespace {

void require_momentum(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("momentum k must be positive and finite");
}

// Solves [[p, q], [r, s]] (x, y)^T = (u, v)^T.
std::pair<Complex, Complex> solve2(Complex p, Complex q, Complex r, Complex s, Complex u,
                                   Complex v) {
    const Complex det = p * s - q * r;
    const double scale = std::max({std::abs(p), std::abs(q), std::abs(r), std::abs(s)});
    if (std::abs(det) <= 1e-14 * scale * scale) {
        throw SingularInterface("interface matching system is singular at this momentum");
    }
    return {(u * s - q * v) / det, (p * v - r * u) / det};
}

// (psi, psi') at x of the plane-wave pair A e^{ikx} + B e^{-ikx}, as a matrix
// acting on (A, B).
Mat2 plane_wave_basis(double k, double x) {
    const Complex ep = std::polar(1.0, k * x);
    const Complex em = std::conj(ep);
    const Complex ik(0.0, k);
    return {ep, em, ik * ep, -ik * em};
}

}  // namespace

double ScatteringSolution::unitarity_defect_left() const {
    return std::abs(std::norm(r_left) + std::norm(t_left) - 1.0);
}

double ScatteringSolution::unitarity_defect_right() const {
    return std::abs(std::norm(r_right) + std::norm(t_right) - 1.0);
}

ScatteringSolution scatter(const BoundaryCondition& bc, double k) {
    require_momentum(k);
    const Mat2 m = interface_matrix(bc);
    const Complex ik(0.0, k);
    ScatteringSolution out;
    out.k = k;

    // Left incidence: (t, ik t) = M (1 + r, ik (1 - r)); unknowns (r, t).
    {
        const Complex c_r0 = m.m00 - m.m01 * ik;
        const Complex c_r1 = m.m10 - m.m11 * ik;
        const Complex rhs0 = -(m.m00 + m.m01 * ik);
        const Complex rhs1 = -(m.m10 + m.m11 * ik);
        // c_r0 r - t = rhs0, c_r1 r - ik t = rhs1
        auto [r, t] = solve2(c_r0, -1.0, c_r1, -ik, rhs0, rhs1);
        out.r_left = r;
        out.t_left = t;
    }
    // Right incidence: (1 + r, ik (r - 1)) = M (t, -ik t); unknowns (r, t).
    {
        const Complex c_t0 = m.m00 - m.m01 * ik;
        const Complex c_t1 = m.m10 - m.m11 * ik;
        // r - c_t0 t = -1, ik r - c_t1 t = ik
        auto [r, t] = solve2(1.0, -c_t0, ik, -c_t1, -1.0, ik);
        out.r_right = r;
        out.t_right = t;
    }
    return out;
}

std::vector<BoundState> bound_states(const BoundaryCondition& bc) {
    const double qa = bc.b();
    const double qb = bc.a() + bc.d();
    const double qc = bc.c();
    std::vector<double> roots;
    if (qa == 0.0) {
        if (qb == 0.0) {
            if (qc == 0.0) throw DegenerateSpectrum("every kappa solves the bound-state condition");
        } else {
            roots.push_back(-qc / qb);
        }
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc == 0.0) {
            roots.push_back(-qb / (2.0 * qa));
        } else if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            // cancellation-free pair of roots
            const double q = -0.5 * (qb + std::copysign(sq, qb));
            if (q != 0.0) {
                roots.push_back(q / qa);
                roots.push_back(qc / q);
            } else {
                // qb = 0 and disc > 0
                roots.push_back(sq / (2.0 * qa));
                roots.push_back(-sq / (2.0 * qa));
            }
        }
    }

    const Complex s = std::polar(1.0, bc.phi());
    std::vector<BoundState> out;
    for (double kappa : roots) {
        if (!(kappa > 0.0) || !std::isfinite(kappa)) continue;
        // psi = e^{kappa x} for x < 0, B e^{-kappa x} for x > 0
        const Complex right = s * (bc.a() + bc.b() * kappa);
        const double norm = std::sqrt((1.0 + std::norm(right)) / (2.0 * kappa));
        out.push_back({kappa, -kappa * kappa, Complex(1.0 / norm), right / norm});
    }
    std::sort(out.begin(), out.end(),
              [](const BoundState& l, const BoundState& r) { return l.energy < r.energy; });
    return out;
}

InteractionChain::InteractionChain(std::vector<ChainSite> sites) : sites_(std::move(sites)) {
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (!std::isfinite(sites_[i].position)) throw ValidationError("chain positions must be finite");
        if (i > 0 && !(sites_[i].position > sites_[i - 1].position)) {
            throw ValidationError("chain positions must be strictly increasing");
        }
    }
}

InteractionChain InteractionChain::slice(std::size_t first, std::size_t last) const {
    last = std::min(last, sites_.size());
    first = std::min(first, last);
    return InteractionChain(std::vector<ChainSite>(sites_.begin() + static_cast<std::ptrdiff_t>(first),
                                                   sites_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Mat2 free_transfer(double k, double length) {
    const double c = std::cos(k * length);
    const double s = std::sin(k * length);
    return {c, s / k, -k * s, c};
}

Mat2 chain_transfer(const InteractionChain& chain, double k) {
    require_momentum(k);
    Mat2 total = Mat2::identity();
    const auto& sites = chain.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i > 0) total = free_transfer(k, sites[i].position - sites[i - 1].position) * total;
        total = interface_matrix(sites[i].bc) * total;
    }
    return total;
}

ScatteringSolution transfer_to_scattering(const Mat2& transfer, double x_left, double x_right,
                                          double k) {
    require_momentum(k);
    // amplitudes (A, B) of e^{ikx}, e^{-ikx}: right = T_pw * left
    const Mat2 t_pw = plane_wave_basis(k, x_right).inverse() * transfer * plane_wave_basis(k, x_left);
    const double scale = std::max({std::abs(t_pw.m00), std::abs(t_pw.m01), std::abs(t_pw.m10), 1.0});
    if (std::abs(t_pw.m11) <= 1e-14 * scale) {
        throw SingularInterface("chain transfer matrix is singular at this momentum");
    }
    ScatteringSolution out;
    out.k = k;
    out.r_left = -t_pw.m10 / t_pw.m11;
    out.t_left = t_pw.det() / t_pw.m11;
    out.t_right = 1.0 / t_pw.m11;
    out.r_right = t_pw.m01 / t_pw.m11;
    return out;
}

ScatteringSolution chain_scatter(const InteractionChain& chain, double k) {
    require_momentum(k);
    if (chain.empty()) return transfer_to_scattering(Mat2::identity(), 0.0, 0.0, k);
    const auto& sites = chain.sites();
    return transfer_to_scattering(chain_transfer(chain, k), sites.front().position,
                                  sites.back().position, k);
}

}  // namespace pointint
