#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pointint/errors.hpp"
#include "pointint/fewbody.hpp"
#include "pointint/scattering.hpp"

using namespace pointint;
using namespace pointint::fewbody;
using std::numbers::pi;

namespace {

Permutation identity(int n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Random point with all pairwise gaps at least `gap`.
std::vector<double> random_point(std::mt19937_64& rng, int n, double gap) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = u(rng);
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < a && ok; ++b) ok = std::abs(x[a] - x[b]) >= gap;
        if (ok) return x;
    }
}

Complex fd_laplacian(const PlaneWaveEigenfunction& psi, const std::vector<double>& x, double h) {
    Complex lap{};
    auto f = [&](const std::vector<double>& p) { return evaluate(psi, p); };
    for (std::size_t axis = 0; axis < x.size(); ++axis) lap += oracles::second_derivative(f, x, axis, h);
    return lap;
}

PairParams random_params(std::mt19937_64& rng, int n, double c) {
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2 * pi);
    std::vector<double> a, phi;
    for (int p = 0; p < n * (n - 1) / 2; ++p) {
        a.push_back(amp(rng));
        phi.push_back(phase(rng));
    }
    return PairParams(n, c, a, phi);
}

}  // namespace

TEST_CASE("permutation helpers") {
    CHECK(to_string({0, 2, 1}) == "132");
    CHECK(parse_permutation("213", 3) == Permutation{1, 0, 2});
    CHECK_THROWS_AS(parse_permutation("113", 3), ValidationError);
    CHECK_THROWS_AS(parse_permutation("12", 3), ValidationError);
    const auto perms = all_permutations(4);
    REQUIRE(perms.size() == 24);
    for (std::size_t r = 0; r < perms.size(); ++r) CHECK(permutation_rank(perms[r]) == r);
}

TEST_CASE("sectors") {
    const SectorGraph two = sectors(2);
    CHECK(two.sectors.size() == 2);
    CHECK(two.walls.size() == 1);
    CHECK(two.walls[0].i == 0);
    CHECK(two.walls[0].j == 1);
    CHECK(to_string(two.sectors[two.walls[0].minus]) == "12");

    CHECK(sectors(3).sectors.size() == 6);
    CHECK(sectors(3).walls.size() == 6);

    const SectorGraph four = sectors(4);
    CHECK(four.sectors.size() == 24);
    for (const auto& w : four.sector_walls) CHECK(w.size() == 3);
    for (const Wall& w : four.walls) {
        // neighbours differ by one adjacent transposition of i and j
        Permutation swapped = four.sectors[w.minus];
        std::swap(swapped[w.position], swapped[w.position + 1]);
        CHECK(swapped == four.sectors[w.plus]);
        CHECK(four.sectors[w.minus][w.position] == w.i);
    }
    CHECK(sectors(6).sectors.size() == 720);
    CHECK_THROWS_AS(sectors(7), NTooLarge);
    CHECK_THROWS_AS(sectors(1), ValidationError);
}

TEST_CASE("Momenta") {
    CHECK(Momenta({1.0, -2.0, 0.5}).energy() == doctest::Approx(5.25));
    CHECK_THROWS_AS(Momenta({1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(Momenta({1.0, 2.0, 1.0 + 1e-10}), ValidationError);
    CHECK_NOTHROW(Momenta({1.0, 1.0 + 1e-8}));
}

TEST_CASE("solve_amplitudes: free particles") {
    for (int n : {2, 3, 4}) {
        std::vector<double> k;
        for (int i = 0; i < n; ++i) k.push_back(0.7 * i - 1.1);
        const Permutation incoming = n == 3 ? Permutation{2, 0, 1} : identity(n);
        const auto psi = solve_amplitudes(Momenta(k), 0.0, incoming);
        const std::size_t in = permutation_rank(incoming);
        for (std::size_t s = 0; s < psi.permutation_count(); ++s) {
            for (std::size_t p = 0; p < psi.permutation_count(); ++p) {
                CHECK(std::abs(psi.amplitude(s, p) - (p == in ? 1.0 : 0.0)) < 1e-14);
            }
        }
        std::mt19937_64 rng(1);
        const auto x = random_point(rng, n, 0.1);
        Complex phase{};
        for (int i = 0; i < n; ++i) phase += k[incoming[i]] * x[i];
        CHECK(std::abs(evaluate(psi, x) - std::exp(Complex(0, 1) * phase)) < 1e-13);
    }
}

TEST_CASE("solve_amplitudes: two bodies reduce to one-body delta scattering") {
    // relative Jacobi momentum q = (k1 - k2) / (2 sqrt 2); sector "12" is the
    // x_12 < 0 half-line
    const double c = 1.7;
    const BoundaryCondition delta = make_bc(0, 1, 0, c, 1);
    for (auto [k1, k2] : {std::pair{1.3, -0.4}, std::pair{0.2, 2.9}, std::pair{-3.0, -3.5}}) {
        const auto psi = solve_amplitudes(Momenta({k1, k2}), c, identity(2));
        const double q = std::abs(k1 - k2) / (2.0 * std::numbers::sqrt2);
        const auto s = scatter(delta, q);
        const std::size_t s12 = 0, s21 = 1, p12 = 0, p21 = 1;
        if (k1 > k2) {
            // incident from x_12 < 0
            CHECK(std::abs(psi.amplitude(s12, p12) - 1.0) < 1e-12);
            CHECK(std::abs(psi.amplitude(s12, p21) - s.r_left) < 1e-12);
            CHECK(std::abs(psi.amplitude(s21, p12) - s.t_left) < 1e-12);
            CHECK(std::abs(psi.amplitude(s21, p21)) < 1e-12);
        } else {
            CHECK(std::abs(psi.amplitude(s21, p12) - 1.0) < 1e-12);
            CHECK(std::abs(psi.amplitude(s21, p21) - s.r_right) < 1e-12);
            CHECK(std::abs(psi.amplitude(s12, p12) - s.t_right) < 1e-12);
            CHECK(std::abs(psi.amplitude(s12, p21)) < 1e-12);
        }
        CHECK(psi.consistency_residual() < 1e-12);
    }
}

TEST_CASE("solve_amplitudes: three bodies") {
    const auto psi = solve_amplitudes(Momenta({-1.0, 0.3, 1.7}), 2.0, identity(3));
    CHECK(psi.consistency_residual() < 1e-12);
    CHECK(bc_residual(psi, PairParams::uniform(3, 2.0), 20) < 1e-10);
    CHECK(psi.energy().real() == doctest::Approx(1.0 + 0.09 + 2.89));

    SUBCASE("continuity from both sides of a wall") {
        std::vector<double> x{0.4, 0.4, -0.9};
        for (double eps : {1e-11}) {
            std::vector<double> l = x, r = x;
            l[0] -= eps;
            r[0] += eps;
            CHECK(std::abs(evaluate(psi, l) - evaluate(psi, r)) < 1e-10);
        }
        CHECK_THROWS_AS(evaluate(psi, x), OnWall);
    }
    SUBCASE("finite-difference energy") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_point(rng, 3, 0.2);
            const Complex value = evaluate(psi, x);
            CHECK(std::abs(-fd_laplacian(psi, x, 1e-2) - psi.energy() * value) < 1e-6);
        }
    }
    SUBCASE("wrong coupling is detected") {
        CHECK(bc_residual(psi, PairParams::uniform(3, 2.5), 5) > 1e-2);
    }
}

TEST_CASE("solve_amplitudes: four and five bodies stay consistent") {
    const auto four = solve_amplitudes(Momenta({-1.2, -0.1, 0.6, 1.9}), -1.5, Permutation{2, 0, 3, 1});
    CHECK(four.consistency_residual() < 1e-10);
    CHECK(bc_residual(four, PairParams::uniform(4, -1.5), 5) < 1e-10);
    const auto five = solve_amplitudes(Momenta({-1.2, -0.1, 0.6, 1.9, 2.4}), 0.8, identity(5));
    CHECK(five.consistency_residual() < 1e-10);
    CHECK(bc_residual(five, PairParams::uniform(5, 0.8), 2) < 1e-10);
}

TEST_CASE("permutation symmetry of scattering solutions") {
    // psi_{P o s^-1}(x) = psi_P(y), y_l = x_{s(l)}
    std::mt19937_64 rng(4);
    const Momenta k({-0.8, 0.25, 1.4});
    const Permutation p{1, 2, 0};
    const auto psi = solve_amplitudes(k, -1.3, p);
    for (const Permutation& sigma : all_permutations(3)) {
        Permutation sigma_inv(3);
        for (int l = 0; l < 3; ++l) sigma_inv[sigma[l]] = l;
        Permutation relabeled(3);
        for (int m = 0; m < 3; ++m) relabeled[m] = p[sigma_inv[m]];
        const auto other = solve_amplitudes(k, -1.3, relabeled);
        for (int trial = 0; trial < 5; ++trial) {
            const auto x = random_point(rng, 3, 0.05);
            std::vector<double> y(3);
            for (int l = 0; l < 3; ++l) y[l] = x[sigma[l]];
            CHECK(std::abs(evaluate(other, x) - evaluate(psi, y)) < 1e-12);
        }
    }
}

TEST_CASE("PairParams") {
    const PairParams u = PairParams::uniform(4, 1.0);
    CHECK(u.parameter_count() == 13);
    CHECK(u.pair_index(0, 1) == 0);
    CHECK(u.pair_index(0, 3) == 2);
    CHECK(u.pair_index(1, 2) == 3);
    CHECK(u.pair_index(2, 3) == 5);
    CHECK(u.pair_index(3, 2) == 5);
    CHECK_THROWS_AS(PairParams(3, 1.0, {1, 1}, {0, 0}), ValidationError);
    CHECK_THROWS_AS(PairParams(2, 1.0, {-1.0}, {0.0}), ValidationError);
    CHECK(PairParams(2, 1.0, {1.0}, {-pi / 2}).phase(0, 1) == doctest::Approx(3 * pi / 2));
}

TEST_CASE("apply_pair_gauge") {
    const auto psi = solve_amplitudes(Momenta({-1.0, 0.3, 1.7}), 2.0, identity(3));
    SUBCASE("identity parameters") {
        const auto same = apply_pair_gauge(psi, PairParams::uniform(3, 2.0));
        for (std::size_t s = 0; s < 6; ++s)
            for (std::size_t p = 0; p < 6; ++p) CHECK(same.amplitude(s, p) == psi.amplitude(s, p));
    }
    SUBCASE("two bodies, phase pi flips the x_12 > 0 side") {
        const auto two = solve_amplitudes(Momenta({1.0, -0.5}), 0.9, identity(2));
        const auto flipped = apply_pair_gauge(two, PairParams(2, 0.9, {1.0}, {pi}));
        for (std::size_t p = 0; p < 2; ++p) {
            CHECK(flipped.amplitude(0, p) == two.amplitude(0, p));
            CHECK(std::abs(flipped.amplitude(1, p) + two.amplitude(1, p)) < 1e-15);
        }
    }
    SUBCASE("random amplitudes and phases satisfy the extended walls") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 5; ++trial) {
            const PairParams params = random_params(rng, 3, 2.0);
            const auto out = apply_pair_gauge(psi, params);
            CHECK(bc_residual(out, params, 10) < 1e-10);
            CHECK(bc_residual(psi, PairParams::uniform(3, 2.0), 10) < 1e-12);
            // detector sensitivity
            std::vector<double> phases = params.phases();
            phases[0] += 0.5;
            CHECK(bc_residual(out, PairParams(3, 2.0, params.amplitudes(), phases), 10) > 1e-2);
            // eigenvalue unchanged
            const auto x = random_point(rng, 3, 0.2);
            CHECK(std::abs(-fd_laplacian(out, x, 1e-2) - psi.energy() * evaluate(out, x)) < 1e-6);
        }
    }
    SUBCASE("coupling mismatch") {
        CHECK_THROWS_AS(apply_pair_gauge(psi, PairParams::uniform(3, 1.0)), ValidationError);
        CHECK_THROWS_AS(apply_pair_gauge(psi, PairParams::uniform(2, 2.0)), ValidationError);
    }
}

TEST_CASE("ground_state") {
    SUBCASE("two bodies against the relative-coordinate problem") {
        const double c = -2.0;
        const GroundState g = ground_state(2, c);
        CHECK(g.beta == doctest::Approx(std::numbers::sqrt2));
        // -sum d^2/dx_i^2 in the x_12 coordinate is -4 d^2/dx_12^2 + centre of mass
        const auto states = bound_states(make_bc(0, 1, 0, c, 1));
        REQUIRE(states.size() == 1);
        CHECK(std::abs(g.energy - 4.0 * states[0].energy) < 1e-12);
        const double fd = oracles::lowest_fd_eigenvalue(4.0 * c, 4.0, 15.0, 1e-3);
        CHECK(std::abs(fd - g.energy) < 1e-3);
    }
    SUBCASE("wall and bulk residuals") {
        std::mt19937_64 rng(12);
        for (int n : {2, 3, 4, 5}) {
            for (double c : {-0.5, -2.0}) {
                const GroundState g = ground_state(n, c);
                CHECK(g.energy == doctest::Approx(-c * c * n * (n * n - 1) / 6.0));
                CHECK(bc_residual(g.eigenfunction, PairParams::uniform(n, c), 10) < 1e-12);
                CHECK(std::abs(g.eigenfunction.energy() - g.energy) < 1e-12);
                const auto x = random_point(rng, n, 0.15);
                const Complex v = evaluate(g.eigenfunction, x);
                double pair_sum = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b) pair_sum += std::abs(x[a] - x[b]);
                CHECK(std::abs(v - std::exp(-g.beta * pair_sum)) < 1e-14);
                CHECK(std::abs(-fd_laplacian(g.eigenfunction, x, 1e-2) - g.energy * v) < 1e-8);
            }
        }
    }
    SUBCASE("unitary pair gauge keeps the spectrum and |psi|") {
        std::mt19937_64 rng(13);
        const GroundState g = ground_state(3, -1.0);
        std::uniform_real_distribution<double> phase(0.0, 2 * pi);
        const PairParams params(3, -1.0, {1, 1, 1}, {phase(rng), phase(rng), phase(rng)});
        const auto out = apply_pair_gauge(g.eigenfunction, params);
        CHECK(std::abs(out.energy() - g.eigenfunction.energy()) < 1e-12);
        CHECK(bc_residual(out, params, 10) < 1e-12);
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_point(rng, 3, 0.15);
            CHECK(std::abs(std::abs(evaluate(out, x) / evaluate(g.eigenfunction, x)) - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(ground_state(3, 0.0), NotAttractive);
    CHECK_THROWS_AS(ground_state(3, 1.0), NotAttractive);
    CHECK_THROWS_AS(ground_state(7, -1.0), NTooLarge);
}
