// Model layer: parameter validation, redimensionalization, the two vector
// fields and their consistency, Jacobians against finite differences,
// closed-form eigenvalues, the threshold function identity, and the
// negative-divergence certificate quantity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "sirf/errors.hpp"
#include "sirf/model.hpp"
#include "sirf/scenarios.hpp"

using namespace sirf;

TEST_CASE("redimensionalization of raw rates") {
    Redimensionalized d = redimensionalize({0.1, 0.4});
    CHECK(d.k == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_FALSE(d.beta_tilde.has_value());
    CHECK_FALSE(d.r0.has_value());

    Redimensionalized e = redimensionalize({0.1, 0.4}, 1.2);
    CHECK(e.beta_tilde.has_value());
    CHECK(*e.beta_tilde == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(e.r0.has_value());
    CHECK(*e.r0 == doctest::Approx(2.4).epsilon(1e-12));

    CHECK_THROWS_AS(redimensionalize({0.0, 0.4}), SpecError);
    CHECK_THROWS_AS(redimensionalize({0.1, -0.4}), SpecError);
    CHECK_THROWS_AS(redimensionalize({0.1, 0.4}, 0.0), SpecError);
}

TEST_CASE("model construction validates k > 1") {
    CHECK_THROWS_AS(Model(1.0, constant_rate(2.0)), SpecError);
    CHECK_THROWS_AS(Model(0.5, constant_rate(2.0)), SpecError);
    CHECK_NOTHROW(Model(1.0 + 1e-9, constant_rate(2.0)));
    Model m(4.0, constant_rate(10.0));
    CHECK(m.k() == 4.0);
    CHECK(m.pole() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("reduced vector field, by hand") {
    Model m(4.0, constant_rate(10.0));
    Rates2 r = vector_field(State2{0.2, 0.3}, m);
    CHECK(r.dI == doctest::Approx(0.2).epsilon(1e-12));  // 0.2*(10*0.5 - 4)
    CHECK(r.dR == doctest::Approx(0.3).epsilon(1e-12));  // 3*0.2 - 0.3
}

TEST_CASE("full vector field, by hand, and its agreement with the reduction") {
    Model m(4.0, constant_rate(10.0));
    Rates3 r3 = vector_field(State3{0.5, 0.2, 0.3}, m);
    CHECK(r3.dS == doctest::Approx(-0.5).epsilon(1e-12)); // 1 - 10*0.5*0.2 - 0.5
    CHECK(r3.dI == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r3.dR == doctest::Approx(0.3).epsilon(1e-12));

    // On the simplex S = 1 - I - R the dI/dR components coincide with the
    // reduced field, and the rates sum to zero (total population constant).
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Model q = example2_model(5.0);
    for (int t = 0; t < 200; ++t) {
        double i = u(rng), rr = u(rng) * (1.0 - i);
        State3 s3{1.0 - i - rr, i, rr};
        Rates3 full = vector_field(s3, q);
        Rates2 red = vector_field(State2{i, rr}, q);
        CHECK(full.dI == doctest::Approx(red.dI).epsilon(1e-12));
        CHECK(full.dR == doctest::Approx(red.dR).epsilon(1e-12));
        CHECK(full.dS + full.dI + full.dR == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jacobian matches central finite differences of the field") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.9);
    Model models[] = {
        Model(4.0, constant_rate(10.0)),
        example2_model(5.0),
        Model(3.0, expression_rate("2 + sin(2*pi*R) + k")),
        Model(6.0, expression_rate("8*exp(-R)")),
    };
    const double h = 1e-6;
    for (const Model& m : models) {
        for (int t = 0; t < 25; ++t) {
            double i = u(rng);
            double r = u(rng) * (1.0 - i);
            Mat2 j = jacobian(State2{i, r}, m);

            Rates2 ip = vector_field(State2{i + h, r}, m);
            Rates2 im = vector_field(State2{i - h, r}, m);
            Rates2 rp = vector_field(State2{i, r + h}, m);
            Rates2 rm = vector_field(State2{i, r - h}, m);
            double fd11 = (ip.dI - im.dI) / (2 * h);
            double fd12 = (rp.dI - rm.dI) / (2 * h);
            double fd21 = (ip.dR - im.dR) / (2 * h);
            double fd22 = (rp.dR - rm.dR) / (2 * h);

            auto close = [](double a, double b) {
                return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}) <=
                       1e-6;
            };
            CHECK(close(j.a11, fd11));
            CHECK(close(j.a12, fd12));
            CHECK(close(j.a21, fd21));
            CHECK(close(j.a22, fd22));
        }
    }
}

TEST_CASE("closed-form eigenvalues of fixed matrices") {
    auto eig = eigenvalues(Mat2{2.0, 0.0, 0.0, -3.0});
    CHECK(eig[0] == std::complex<double>(-3.0, 0.0));
    CHECK(eig[1] == std::complex<double>(2.0, 0.0));

    eig = eigenvalues(Mat2{0.0, 1.0, -1.0, 0.0}); // rotation: pure imaginary
    CHECK(eig[0].real() == doctest::Approx(0.0).scale(1.0));
    CHECK(eig[0].imag() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eig[1].imag() == doctest::Approx(1.0).epsilon(1e-15));

    eig = eigenvalues(Mat2{0.0, 1.0, -2.0, -2.0}); // -1 +- i
    CHECK(eig[0].real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eig[0].imag() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eig[1].imag() == doctest::Approx(1.0).epsilon(1e-15));

    eig = eigenvalues(Mat2{3.0, 4.0, 1.0, 3.0}); // 3 +- 2
    CHECK(eig[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig[1].real() == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("triangular matrices keep their diagonal spectrum exactly") {
    // The Jacobian at the disease-free state always has a12 = 0, so its
    // eigenvalues must come out bit-exact, even for near-double roots.
    Model m(4.0, constant_rate(10.0));
    Mat2 j = jacobian(State2{0.0, 0.0}, m);
    CHECK(j.a12 == 0.0);
    auto eig = eigenvalues(j);
    CHECK(eig[0] == std::complex<double>(-1.0, 0.0));
    CHECK(eig[1] == std::complex<double>(6.0, 0.0));

    // A contrived near-degenerate diagonal: the quadratic formula would
    // round here; the triangular path must not.
    auto tight = eigenvalues(Mat2{-1.0 + 1e-13, 0.0, 7.0, -1.0});
    CHECK(tight[0] == std::complex<double>(-1.0, 0.0));
    CHECK(tight[1] == std::complex<double>(-1.0 + 1e-13, 0.0));
}

TEST_CASE("threshold function values and pole guard") {
    CHECK(g_threshold(0.0, 5.0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g_threshold(0.5, 5.0) == doctest::Approx(40.0 / 3.0).epsilon(1e-13));
    CHECK(g_threshold(0.0, 4.0) == doctest::Approx(4.0).epsilon(1e-14));

    double pole = 0.8; // (k-1)/k for k = 5
    CHECK_THROWS_AS(g_threshold(pole, 5.0), NumericError);
    CHECK_THROWS_AS(g_threshold(pole - 1e-13, 5.0), NumericError);
    CHECK_THROWS_AS(g_threshold(pole + 1e-13, 5.0), NumericError);
    CHECK(std::isfinite(g_threshold(pole - 1e-9, 5.0)));
    // Right of the pole the function is finite (and negative).
    CHECK(g_threshold(0.9, 5.0) < 0.0);
}

TEST_CASE("threshold derivative identity g' = g^2/(k-1)") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> uk(1.05, 20.0);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        double k = uk(rng);
        double pole = (k - 1.0) / k;
        double r = ur(rng) * 0.9 * pole;
        Dual g = g_threshold(Dual::variable(r), k);
        double predicted = g.val * g.val / (k - 1.0);
        double scale = std::max(1.0, std::fabs(g.der));
        CHECK(std::fabs(g.der - predicted) / scale <= 1e-10);
        // And the dual value agrees with the scalar overload.
        CHECK(g.val == g_threshold(r, k));
    }
}

TEST_CASE("rescaled divergence is strictly negative when f is positive") {
    Model m(5.0, constant_rate(10.0));
    CHECK(dulac_divergence(State2{0.2, 0.3}, m) == doctest::Approx(-15.0).epsilon(1e-12));
    CHECK_THROWS_AS(dulac_divergence(State2{0.0, 0.3}, m), SpecError);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Model q = example2_model(5.0);
    for (int t = 0; t < 500; ++t) {
        double i = 1e-6 + u(rng) * (1.0 - 1e-6);
        double r = u(rng) * (1.0 - i);
        CHECK(dulac_divergence(State2{i, r}, q) < 0.0);
    }
}
