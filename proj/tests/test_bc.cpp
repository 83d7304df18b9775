#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pointint/bc.hpp"
#include "pointint/errors.hpp"

using namespace pointint;
using std::numbers::pi;

namespace {

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

}  // namespace

TEST_CASE("make_bc accepts unimodular matrices and normalizes the phase") {
    const BoundaryCondition id = make_bc(0, 1, 0, 0, 1);
    CHECK(id.is_identity_matrix());
    CHECK(id.phi() == 0.0);

    const BoundaryCondition bc = make_bc(pi / 2, 1, 0, -3, 1);
    CHECK(bc.a() * bc.d() - bc.b() * bc.c() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bc.phi() == doctest::Approx(pi / 2));

    CHECK(make_bc(-pi / 2, 1, 0, 0, 1).phi() == doctest::Approx(3 * pi / 2));
    CHECK(make_bc(5 * pi, 1, 0, 0, 1).phi() == doctest::Approx(pi));
    const double tiny_negative = make_bc(-1e-300, 1, 0, 0, 1).phi();
    CHECK(tiny_negative >= 0.0);
    CHECK(tiny_negative < 2 * pi);
}

TEST_CASE("make_bc rejects a non-unit determinant and non-finite input") {
    CHECK_THROWS_AS(make_bc(0, 2, 0, 0, 1), DeterminantViolation);
    CHECK_THROWS_AS(make_bc(0, 1, 0, 0, 1 + 1e-9), DeterminantViolation);
    CHECK_NOTHROW(make_bc(0, 1, 0, 0, 1 + 1e-13));
    CHECK_THROWS_AS(make_bc(NAN, 1, 0, 0, 1), ValidationError);
    CHECK_THROWS_AS(make_bc(0, INFINITY, 0, 0, 1), ValidationError);
}

TEST_CASE("bc_from_gauge_strength") {
    CHECK(bc_from_gauge_strength({0.0}).phi() == 0.0);
    // (2 + 2i) / (2 - 2i) = i
    CHECK(bc_from_gauge_strength({2.0}).phi() == doctest::Approx(pi / 2).epsilon(1e-15));
    // (2 - 2i) / (2 + 2i) = -i
    CHECK(bc_from_gauge_strength({-2.0}).phi() == doctest::Approx(3 * pi / 2).epsilon(1e-15));

    const BoundaryCondition bc = bc_from_gauge_strength({7.5});
    CHECK(bc.is_identity_matrix());

    SUBCASE("monotone unwrapped phase in (-pi, pi)") {
        double previous = -pi;
        for (double alpha = -100.0; alpha <= 100.0; alpha += 0.25) {
            const double phi = unwrapped_gauge_phase({alpha});
            CHECK(phi > previous);
            CHECK(phi < pi);
            CHECK(circular_distance(phi, bc_from_gauge_strength({alpha}).phi()) < 1e-14);
            previous = phi;
        }
    }
}

TEST_CASE("interface_matrix") {
    const Mat2 id = interface_matrix(make_bc(0, 1, 0, 0, 1));
    CHECK(id.max_abs_diff(Mat2::identity()) == 0.0);

    const Mat2 minus = interface_matrix(make_bc(pi, 1, 0, 0, 1));
    CHECK(minus.max_abs_diff(Complex(-1.0) * Mat2::identity()) < 1e-15);

    const Mat2 delta = interface_matrix(make_bc(0, 1, 0, 2.5, 1));
    CHECK(delta.max_abs_diff(Mat2{1.0, 0.0, 2.5, 1.0}) == 0.0);

    SUBCASE("unimodular determinant e^{2 i phi}") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> phase(0.0, 2 * pi);
        for (int trial = 0; trial < 200; ++trial) {
            const auto m = oracles::random_unimodular(rng);
            const BoundaryCondition bc = make_bc(phase(rng), m.a, m.b, m.c, m.d);
            const Complex det = interface_matrix(bc).det();
            CHECK(std::abs(std::abs(det) - 1.0) < 1e-12);
            CHECK(std::abs(det - std::polar(1.0, 2 * bc.phi())) < 1e-12);
        }
    }
}

TEST_CASE("chi_step") {
    CHECK(chi_step(-1.0, 1.234) == Complex(1.0, 0.0));
    CHECK(std::abs(chi_step(0.0, pi / 2) - Complex(0.0, 1.0)) < 1e-16);
    CHECK(std::abs(chi_step(1.0, pi) - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(chi_step(3.0, 0.4, 2.0) - std::polar(2.0, 0.4)) < 1e-15);
    CHECK_THROWS_AS(chi_step(1.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(chi_step(1.0, 0.0, -1.0), ValidationError);
    for (double x = -3.0; x <= 3.0; x += 0.37) CHECK(std::abs(std::abs(chi_step(x, 2.1)) - 1.0) < 1e-15);
}

TEST_CASE("canonical_amplitude folds a negative factor into the phase") {
    const auto ap = canonical_amplitude(-2.0, 0.5);
    CHECK(ap.amplitude == 2.0);
    CHECK(ap.phi == doctest::Approx(0.5 + pi));
    CHECK(std::abs(std::polar(ap.amplitude, ap.phi) - Complex(-2.0) * std::polar(1.0, 0.5)) < 1e-15);
    CHECK_THROWS_AS(canonical_amplitude(0.0, 0.0), ValidationError);
}

namespace {

// Gaussian bump of unit area scaled to integrate to `area`, on [-1, 1].
struct Bump {
    std::vector<double> x, a;
};

Bump bump(double area, double width, std::size_t n) {
    Bump b;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        b.x.push_back(x);
        b.a.push_back(area * std::exp(-x * x / (2 * width * width)) / (std::sqrt(2 * pi) * width));
    }
    return b;
}

}  // namespace

TEST_CASE("smooth_gauge_phase") {
    SUBCASE("zero profile") {
        const std::vector<double> x{-1, 0, 1};
        const std::vector<double> a{0, 0, 0};
        for (double p : {-2.0, -0.5, 0.3, 4.0}) CHECK(smooth_gauge_phase({x, a}, p) == Complex(1.0, 0.0));
    }
    SUBCASE("narrow bump of area 0.1 approaches the step gauge") {
        const double alpha = 0.1;
        const Bump b = bump(alpha, 0.02, 4001);
        const Complex right = smooth_gauge_phase({b.x, b.a}, 2.0);
        CHECK(std::abs(right - std::polar(1.0, alpha)) < 1e-9);
        const double phi = bc_from_gauge_strength({alpha}).phi();
        CHECK(std::abs(right - chi_step(2.0, phi)) <= alpha * alpha);
        CHECK(std::abs(smooth_gauge_phase({b.x, b.a}, -2.0) - chi_step(-2.0, phi)) == 0.0);
        // halfway through a symmetric bump the phase is alpha / 2
        CHECK(std::arg(smooth_gauge_phase({b.x, b.a}, 0.0)) == doctest::Approx(alpha / 2).epsilon(1e-6));
    }
    SUBCASE("bump of area 2 pi winds back to 1") {
        const Bump b = bump(2 * pi, 0.05, 8001);
        CHECK(std::abs(smooth_gauge_phase({b.x, b.a}, 1.5) - 1.0) < 1e-8);
    }
    SUBCASE("small-alpha agreement is quadratic") {
        for (double alpha : {0.1, 0.05, 0.01, -0.03}) {
            const Bump b = bump(alpha, 0.02, 4001);
            const double phi = bc_from_gauge_strength({alpha}).phi();
            CHECK(std::abs(smooth_gauge_phase({b.x, b.a}, 1.0) - chi_step(1.0, phi)) <= alpha * alpha);
        }
    }
    SUBCASE("invalid grids") {
        const std::vector<double> x{0, 0};
        const std::vector<double> a{1, 1};
        CHECK_THROWS_AS(smooth_gauge_phase({x, a}, 1.0), ValidationError);
        const std::vector<double> short_a{1};
        CHECK_THROWS_AS(smooth_gauge_phase({x, short_a}, 1.0), ValidationError);
    }
}
