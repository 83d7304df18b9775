#include "pointint/fewbody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "pointint/bc.hpp"
#include "pointint/errors.hpp"

namespace pointint::fewbody {

namespace {

// d/dx_ij of exp(i (k_a x_i + k_b x_j + ...)) divided by the function.
Complex jacobi_derivative_factor(Complex k_i, Complex k_j) {
    return Complex(0.0, 1.0) * (k_i - k_j) / (2.0 * std::numbers::sqrt2);
}

void require_particle_count(int n) {
    if (n < 2) throw ValidationError("at least two particles are required");
    if (n > kMaxParticles) {
        throw NTooLarge("particle count " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxParticles));
    }
}

// Ordering of particles by position; ties are caller's concern.
Permutation ordering_of(std::span<const double> point) {
    Permutation q(point.size());
    std::iota(q.begin(), q.end(), 0);
    std::stable_sort(q.begin(), q.end(), [&](int l, int r) { return point[l] < point[r]; });
    return q;
}

}  // namespace

std::string to_string(const Permutation& p) {
    std::string s;
    for (int v : p) s += static_cast<char>('1' + v);
    return s;
}

Permutation parse_permutation(const std::string& text, int n) {
    if (static_cast<int>(text.size()) != n) {
        throw ValidationError("permutation \"" + text + "\" must have " + std::to_string(n) + " digits");
    }
    Permutation p;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (char ch : text) {
        const int v = ch - '1';
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw ValidationError("\"" + text + "\" is not a permutation of 1.." + std::to_string(n));
        }
        seen[static_cast<std::size_t>(v)] = true;
        p.push_back(v);
    }
    return p;
}

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
    return f;
}

std::size_t permutation_rank(const Permutation& p) {
    const int n = static_cast<int>(p.size());
    std::size_t rank = 0;
    for (int i = 0; i < n; ++i) {
        std::size_t smaller = 0;
        for (int j = i + 1; j < n; ++j) {
            if (p[j] < p[i]) ++smaller;
        }
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

std::vector<Permutation> all_permutations(int n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Momenta::Momenta(std::vector<double> k) : k_(std::move(k)) {
    if (k_.size() < 2) throw ValidationError("at least two momenta are required");
    for (std::size_t a = 0; a < k_.size(); ++a) {
        if (!std::isfinite(k_[a])) throw ValidationError("momenta must be finite");
        for (std::size_t b = 0; b < a; ++b) {
            if (std::abs(k_[a] - k_[b]) <= kMomentumGap) {
                throw ValidationError("momenta " + std::to_string(b + 1) + " and " +
                                      std::to_string(a + 1) + " coincide");
            }
        }
    }
}

double Momenta::energy() const {
    double e = 0.0;
    for (double v : k_) e += v * v;
    return e;
}

SectorGraph sectors(int n) {
    require_particle_count(n);
    SectorGraph g;
    g.n = n;
    g.sectors = all_permutations(n);
    g.sector_walls.resize(g.sectors.size());
    for (std::size_t s = 0; s < g.sectors.size(); ++s) {
        for (int m = 0; m + 1 < n; ++m) {
            Permutation other = g.sectors[s];
            std::swap(other[m], other[m + 1]);
            const std::size_t t = g.index_of(other);
            if (t < s) continue;
            const int p = g.sectors[s][m];
            const int q = g.sectors[s][m + 1];
            // minus side has the lower-labelled particle on the left
            Wall w{p < q ? s : t, p < q ? t : s, std::min(p, q), std::max(p, q), m};
            g.sector_walls[s].push_back(g.walls.size());
            g.sector_walls[t].push_back(g.walls.size());
            g.walls.push_back(w);
        }
    }
    return g;
}

PlaneWaveEigenfunction::PlaneWaveEigenfunction(std::vector<Complex> momenta, double c)
    : momenta_(std::move(momenta)), c_(c), n_perms_(0) {
    require_particle_count(static_cast<int>(momenta_.size()));
    perms_ = all_permutations(static_cast<int>(momenta_.size()));
    n_perms_ = perms_.size();
    amplitudes_.assign(n_perms_ * n_perms_, Complex{});
}

Complex PlaneWaveEigenfunction::energy() const {
    Complex e{};
    for (const Complex& k : momenta_) e += k * k;
    return e;
}

PlaneWaveEigenfunction::SectorLimit PlaneWaveEigenfunction::sector_limit(
    std::size_t sector, std::span<const double> point, int i, int j) const {
    SectorLimit out{};
    for (std::size_t p = 0; p < n_perms_; ++p) {
        const Complex amp = amplitude(sector, p);
        if (amp == Complex{}) continue;
        const Permutation& perm = perms_[p];
        Complex phase{};
        for (std::size_t l = 0; l < point.size(); ++l) {
            phase += momenta_[static_cast<std::size_t>(perm[l])] * point[l];
        }
        const Complex term = amp * std::exp(Complex(0.0, 1.0) * phase);
        out.value += term;
        if (i != j) {
            out.d_jacobi += term * jacobi_derivative_factor(momenta_[static_cast<std::size_t>(perm[i])],
                                                            momenta_[static_cast<std::size_t>(perm[j])]);
        }
    }
    return out;
}

std::size_t incoming_sector(std::span<const double> momenta, const Permutation& perm) {
    // fully incoming: momenta decrease from left to right
    Permutation order(perm.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
        return momenta[static_cast<std::size_t>(perm[l])] > momenta[static_cast<std::size_t>(perm[r])];
    });
    return permutation_rank(order);
}

PlaneWaveEigenfunction solve_amplitudes(const Momenta& momenta, double c, const Permutation& incoming) {
    const int n = momenta.size();
    require_particle_count(n);
    if (!std::isfinite(c)) throw ValidationError("coupling must be finite");
    parse_permutation(to_string(incoming), n);  // validates

    const SectorGraph graph = sectors(n);
    const std::vector<Permutation> perms = all_permutations(n);
    const std::size_t np = perms.size();
    const auto& k = momenta.values();
    std::vector<Complex> kc(k.begin(), k.end());

    auto unknown = [np](std::size_t sector, std::size_t perm) {
        return static_cast<int>(sector * np + perm);
    };

    using Triplet = Eigen::Triplet<Complex>;
    std::vector<Triplet> entries;
    std::vector<Complex> rhs;
    int row = 0;

    // Wall relations, one continuity and one derivative-jump equation per
    // pair of plane waves that coincide on the wall.
    for (const Wall& w : graph.walls) {
        for (std::size_t p = 0; p < np; ++p) {
            const Permutation& perm = perms[p];
            if (perm[w.i] > perm[w.j]) continue;  // partner handled with p
            Permutation partner = perm;
            std::swap(partner[w.i], partner[w.j]);
            const std::size_t q = permutation_rank(partner);
            const Complex dp = jacobi_derivative_factor(kc[perm[w.i]], kc[perm[w.j]]);
            const Complex dq = -dp;

            // psi(+0) - psi(-0) = 0
            entries.emplace_back(row, unknown(w.plus, p), 1.0);
            entries.emplace_back(row, unknown(w.plus, q), 1.0);
            entries.emplace_back(row, unknown(w.minus, p), -1.0);
            entries.emplace_back(row, unknown(w.minus, q), -1.0);
            rhs.push_back(0.0);
            ++row;
            // dpsi(+0) - dpsi(-0) - c psi(-0) = 0
            entries.emplace_back(row, unknown(w.plus, p), dp);
            entries.emplace_back(row, unknown(w.plus, q), dq);
            entries.emplace_back(row, unknown(w.minus, p), -(dp + c));
            entries.emplace_back(row, unknown(w.minus, q), -(dq + c));
            rhs.push_back(0.0);
            ++row;
        }
    }

    // One incoming wave: pin the fully incoming amplitude of every sector.
    const std::size_t in_sector = incoming_sector(k, incoming);
    Permutation desc(static_cast<std::size_t>(n));
    std::iota(desc.begin(), desc.end(), 0);
    std::sort(desc.begin(), desc.end(), [&](int l, int r) { return k[l] > k[r]; });
    for (std::size_t s = 0; s < graph.sectors.size(); ++s) {
        Permutation perm(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) perm[graph.sectors[s][m]] = desc[m];
        entries.emplace_back(row, unknown(s, permutation_rank(perm)), 1.0);
        rhs.push_back(s == in_sector ? 1.0 : 0.0);
        ++row;
    }

    const int n_unknowns = static_cast<int>(np * np);
    Eigen::SparseMatrix<Complex> a(row, n_unknowns);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::VectorXcd b(row);
    for (int r = 0; r < row; ++r) b[r] = rhs[static_cast<std::size_t>(r)];

    // Least squares on the sparse system: a direct solve of the normal
    // equations with iterative refinement for small N, LSCG beyond.
    Eigen::VectorXcd x;
    if (n <= 4) {
        const Eigen::SparseMatrix<Complex> ah = a.adjoint();
        const Eigen::SparseMatrix<Complex> normal = ah * a;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> ldlt(normal);
        if (ldlt.info() != Eigen::Success) throw InconsistentSystem("amplitude normal equations are singular");
        x = ldlt.solve(ah * b);
        for (int pass = 0; pass < 3; ++pass) {
            const Eigen::VectorXcd correction = ldlt.solve(ah * (b - a * x));
            x += correction;
            if (correction.cwiseAbs().maxCoeff() < 1e-15) break;
        }
    } else {
        Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<Complex>> lscg;
        lscg.setTolerance(1e-15);
        lscg.setMaxIterations(100 * n_unknowns);
        lscg.compute(a);
        x = lscg.solve(b);
    }
    const double residual = (a * x - b).cwiseAbs().maxCoeff();
    if (!(residual <= kConsistencyTolerance)) {
        throw InconsistentSystem("amplitude system is inconsistent, residual " + std::to_string(residual));
    }

    PlaneWaveEigenfunction psi(kc, c);
    for (std::size_t s = 0; s < np; ++s) {
        for (std::size_t p = 0; p < np; ++p) {
            const Complex v = x[unknown(s, p)];
            // exact zeros keep evaluation cheap and the c = 0 case exact
            psi.set_amplitude(s, p, std::abs(v) < 1e-15 ? Complex{} : v);
        }
    }
    psi.set_consistency_residual(residual);
    return psi;
}

PairParams::PairParams(int n, double c, std::vector<double> amplitudes, std::vector<double> phases)
    : n_(n), c_(c), amplitudes_(std::move(amplitudes)), phases_(std::move(phases)) {
    require_particle_count(n);
    if (!std::isfinite(c)) throw ValidationError("coupling must be finite");
    const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
    if (amplitudes_.size() != pairs || phases_.size() != pairs) {
        throw ValidationError("expected " + std::to_string(pairs) + " pair amplitudes and phases");
    }
    for (std::size_t p = 0; p < pairs; ++p) {
        if (!(amplitudes_[p] > 0.0) || !std::isfinite(amplitudes_[p])) {
            throw ValidationError("pair amplitudes must be positive; encode a negative factor as |a| with phase + pi");
        }
        if (!std::isfinite(phases_[p])) throw ValidationError("pair phases must be finite");
        phases_[p] = normalize_phase(phases_[p]);
    }
}

PairParams PairParams::uniform(int n, double c) {
    const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
    return PairParams(n, c, std::vector<double>(pairs, 1.0), std::vector<double>(pairs, 0.0));
}

std::size_t PairParams::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) throw ValidationError("invalid particle pair");
    // pairs (0,1), (0,2), ..., (1,2), ...
    return static_cast<std::size_t>(i * n_ - i * (i + 1) / 2 + (j - i - 1));
}

PlaneWaveEigenfunction apply_pair_gauge(const PlaneWaveEigenfunction& psi, const PairParams& params) {
    if (params.n() != psi.n()) throw ValidationError("pair parameters do not match the particle count");
    if (params.coupling() != psi.coupling()) {
        throw ValidationError("pair parameters carry a different coupling than the eigenfunction");
    }
    const SectorGraph graph = sectors(psi.n());
    PlaneWaveEigenfunction out = psi;
    for (std::size_t s = 0; s < graph.sectors.size(); ++s) {
        const Permutation& order = graph.sectors[s];
        Complex factor{1.0};
        // pair (i, j), i < j, has x_ij >= 0 when j sits left of i
        for (int left = 0; left < psi.n(); ++left) {
            for (int right = left + 1; right < psi.n(); ++right) {
                const int pi = order[left];
                const int pj = order[right];
                if (pj < pi) factor *= std::polar(params.amplitude(pj, pi), params.phase(pj, pi));
            }
        }
        for (std::size_t p = 0; p < psi.permutation_count(); ++p) {
            out.set_amplitude(s, p, factor * psi.amplitude(s, p));
        }
    }
    return out;
}

Complex evaluate(const PlaneWaveEigenfunction& psi, std::span<const double> point) {
    if (static_cast<int>(point.size()) != psi.n()) throw ValidationError("point dimension mismatch");
    for (std::size_t a = 0; a < point.size(); ++a) {
        if (!std::isfinite(point[a])) throw ValidationError("point coordinates must be finite");
        for (std::size_t b = 0; b < a; ++b) {
            if (std::abs(point[a] - point[b]) <= kWallTolerance) {
                throw OnWall("point lies on the wall x_" + std::to_string(b + 1) + " = x_" +
                             std::to_string(a + 1));
            }
        }
    }
    return psi.sector_limit(permutation_rank(ordering_of(point)), point, 0, 0).value;
}

double bc_residual(const PlaneWaveEigenfunction& psi, const PairParams& params, int wall_samples,
                   std::uint64_t seed) {
    if (wall_samples < 1) throw ValidationError("wall_samples must be at least 1");
    if (params.n() != psi.n()) throw ValidationError("pair parameters do not match the particle count");
    const int n = psi.n();
    const SectorGraph graph = sectors(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const double c = params.coupling();

    double worst = 0.0;
    std::vector<double> slots(static_cast<std::size_t>(n - 1));
    std::vector<double> point(static_cast<std::size_t>(n));
    for (const Wall& w : graph.walls) {
        const Permutation& order = graph.sectors[w.minus];
        const Complex s = std::polar(params.amplitude(w.i, w.j), params.phase(w.i, w.j));
        for (int sample = 0; sample < wall_samples; ++sample) {
            // n - 1 distinct sorted slot positions; the pair shares one slot
            for (auto& v : slots) v = coord(rng);
            std::sort(slots.begin(), slots.end());
            int slot = 0;
            for (int m = 0; m < n; ++m) {
                point[static_cast<std::size_t>(order[m])] = slots[static_cast<std::size_t>(slot)];
                if (m != w.position) ++slot;
            }
            const auto minus = psi.sector_limit(w.minus, point, w.i, w.j);
            const auto plus = psi.sector_limit(w.plus, point, w.i, w.j);
            worst = std::max(worst, std::abs(plus.value - s * minus.value));
            worst = std::max(worst, std::abs(plus.d_jacobi - s * (c * minus.value + minus.d_jacobi)));
        }
    }
    return worst;
}

GroundState ground_state(int n, double c) {
    require_particle_count(n);
    if (!(c < 0.0)) throw NotAttractive("a bound ground state requires c < 0");
    // the kink -beta |x_i - x_j| = -beta |x_ij| / sqrt(2) has jump -sqrt(2) beta
    const double beta = -c / std::numbers::sqrt2;

    // In sector Q the function is exp(-beta sum_m (2m - N + 1) x_{Q(m)}),
    // i.e. the plane wave with momentum i beta (2m - N + 1) on slot m.
    std::vector<Complex> k(static_cast<std::size_t>(n));
    double weight = 0.0;
    for (int m = 0; m < n; ++m) {
        const double f = 2.0 * m - n + 1.0;
        k[static_cast<std::size_t>(m)] = Complex(0.0, beta * f);
        weight += f * f;
    }
    PlaneWaveEigenfunction psi(k, c);
    const SectorGraph graph = sectors(n);
    for (std::size_t s = 0; s < graph.sectors.size(); ++s) {
        Permutation perm(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) perm[graph.sectors[s][m]] = m;
        psi.set_amplitude(s, permutation_rank(perm), 1.0);
    }
    return GroundState{n, beta, -beta * beta * weight, std::move(psi)};
}

}  // namespace pointint::fewbody
