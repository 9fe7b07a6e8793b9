// Equilibrium census: the crossing finder against independently coded
// root oracles (closed forms and a local bisection on the defining
// equation), classification signs, the disease-free state, ordering
// consistency, tangency reporting, and the certificate bundle.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "sirf/equilibria.hpp"
#include "sirf/errors.hpp"
#include "sirf/model.hpp"
#include "sirf/scenarios.hpp"

using namespace sirf;

namespace {

// Independent bisection on a plain callable; shares no code with the
// finder under test.
double bisect_oracle(const std::function<double(double)>& h, double lo, double hi) {
    double flo = h(lo);
    REQUIRE(flo * h(hi) < 0.0);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = h(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("constant rate, closed-form endemic point (beta = 12, k = 4)") {
    Model m = constant_model(12.0, 4.0);
    FinderResult res = find_endemic_equilibria(m);
    REQUIRE(res.equilibria.size() == 1);
    const Equilibrium& e = res.equilibria.front();
    // g(R) = 3/(0.75 - R) = 12  =>  R* = 0.5, I* = R*/3.
    CHECK(std::fabs(e.R - 0.5) <= 1e-10);
    CHECK(std::fabs(e.I - 0.5 / 3.0) <= 1e-10);
    CHECK(e.I * 3.0 == e.R); // published pair satisfies I*(k-1) = R exactly
    CHECK(e.residual <= 1e-10);
    CHECK(e.classification == Stability::Stable);
    CHECK(e.f_deriv == 0.0);
    CHECK(e.stability_margin == doctest::Approx(-48.0).epsilon(1e-9));
    CHECK(res.possible_tangencies.empty());
}

TEST_CASE("constant rate, closed-form endemic point (beta = 10, k = 5)") {
    Model m = constant_model(10.0, 5.0);
    FinderResult res = find_endemic_equilibria(m);
    REQUIRE(res.equilibria.size() == 1);
    CHECK(std::fabs(res.equilibria[0].R - 0.4) <= 1e-10);
    CHECK(std::fabs(res.equilibria[0].I - 0.1) <= 1e-10);
}

TEST_CASE("decreasing expression rate against the quadratic closed form") {
    // f(R) = 5 - 2R, k = 4: f = g  <=>  2R^2 - 6.5R + 0.75 = 0, whose only
    // root left of the pole is (6.5 - sqrt(36.25))/4.
    Model m(4.0, expression_rate("5 - 2*R"));
    double oracle = (6.5 - std::sqrt(36.25)) / 4.0;

    FinderResult res = find_endemic_equilibria(m);
    REQUIRE(res.equilibria.size() == 1);
    const Equilibrium& e = res.equilibria.front();
    CHECK(std::fabs(e.R - oracle) <= 1e-10);
    CHECK(e.classification == Stability::Stable);
    CHECK(e.f_deriv == doctest::Approx(-2.0).epsilon(1e-12));

    Certificates c = global_certificates(m, res.equilibria);
    CHECK(c.existence.exists);
    CHECK_FALSE(c.existence.heuristic);
    REQUIRE(c.existence.witness_r.has_value());
    CHECK(*c.existence.witness_r == 0.0); // f(0) = 5 > 4 = k
    CHECK(c.uniqueness == UniquenessVerdict::UniqueStable);
    CHECK(c.uniqueness_heuristic); // monotonicity was sampled
    CHECK(c.global == GlobalVerdict::StableEndemic);
}

TEST_CASE("increasing rate with two crossings: saddle then stable") {
    // f(R) = 2 + 60 R^2 with k = 4 starts below g, overtakes it, and is
    // overtaken again as g blows up: exactly two endemic equilibria.
    Model m(4.0, expression_rate("2 + 60*R^2"));
    auto h = [](double r) { return (2.0 + 60.0 * r * r) - 3.0 / (0.75 - r); };
    double r1 = bisect_oracle(h, 0.2, 0.3);
    double r2 = bisect_oracle(h, 0.6, 0.7);

    FinderResult res = find_endemic_equilibria(m);
    REQUIRE(res.equilibria.size() == 2);
    CHECK(std::fabs(res.equilibria[0].R - r1) <= 1e-10);
    CHECK(std::fabs(res.equilibria[1].R - r2) <= 1e-10);
    CHECK(res.equilibria[0].classification == Stability::Saddle);
    CHECK(res.equilibria[1].classification == Stability::Stable);
    CHECK(res.equilibria[0].stability_margin > 0.0);
    CHECK(res.equilibria[1].stability_margin < 0.0);
    CHECK(saddle_successor_violations(res.equilibria).empty());

    // f(0) = 2 < 4 yet endemic states exist: bistable, no global verdict.
    Certificates c = global_certificates(m, res.equilibria);
    CHECK(c.existence.exists);
    CHECK_FALSE(c.existence.heuristic);
    REQUIRE(c.existence.witness_r.has_value());
    CHECK(h(*c.existence.witness_r) > 0.0);
    CHECK(c.uniqueness == UniquenessVerdict::Inconclusive);
    CHECK(c.global == GlobalVerdict::Unknown);
}

TEST_CASE("no endemic state below threshold (constant 4, k = 5)") {
    Model m = constant_model(4.0, 5.0);
    FinderResult res = find_endemic_equilibria(m);
    CHECK(res.equilibria.empty());

    Certificates c = global_certificates(m, res.equilibria);
    CHECK_FALSE(c.existence.exists);
    CHECK(c.existence.heuristic); // absence was only sampled
    CHECK_FALSE(c.existence.witness_r.has_value());
    CHECK(c.uniqueness == UniquenessVerdict::NoEndemic);
    CHECK_FALSE(c.uniqueness_heuristic); // constant rate: no sampling caveat
    CHECK(c.global == GlobalVerdict::StableDiseaseFree);
}

TEST_CASE("disease-free classification at, above, and near the threshold") {
    Equilibrium below = disease_free_equilibrium(constant_model(4.0, 5.0));
    CHECK(below.kind == Equilibrium::Kind::DiseaseFree);
    CHECK(below.I == 0.0);
    CHECK(below.R == 0.0);
    CHECK(below.classification == Stability::Stable);
    CHECK(below.stability_margin == doctest::Approx(-1.0).epsilon(1e-12));
    // Exact triangular eigenvalues {-1, f(0) - k}.
    CHECK(below.eigenvalues[0] == std::complex<double>(-1.0, 0.0));
    CHECK(below.eigenvalues[1] == std::complex<double>(4.0 - 5.0, 0.0));

    Equilibrium above = disease_free_equilibrium(constant_model(10.0, 5.0));
    CHECK(above.classification == Stability::Saddle);
    CHECK(above.eigenvalues[0] == std::complex<double>(-1.0, 0.0));
    CHECK(above.eigenvalues[1] == std::complex<double>(5.0, 0.0));

    Equilibrium marginal =
        disease_free_equilibrium(constant_model(5.0 + 1e-10, 5.0));
    CHECK(marginal.classification == Stability::Marginal);
}

TEST_CASE("multistable family: knots, alternation, and the extension root") {
    // n = 2, k = 3: crossings pinned at i/6 for i = 1..3, then one more
    // where the linear extension meets the blowing-up threshold.
    Model m = example1_model({2, 3.0, {}});
    FinderResult res = find_endemic_equilibria(m);
    REQUIRE(res.equilibria.size() == 4);

    const double w = 6.0 * 3.14159265358979323846; // 2*n*pi*k/(k-1)
    for (int i = 1; i <= 3; ++i) {
        const Equilibrium& e = res.equilibria[static_cast<std::size_t>(i - 1)];
        CHECK(std::fabs(e.R - i / 6.0) <= 1e-9);
        // At a knot f = g exactly, so the margin reduces to f' - g' = -w*(-1)^i.
        double expected_margin = (i % 2 == 1) ? w : -w;
        CHECK(std::fabs(e.stability_margin - expected_margin) <=
              1e-6 * (1.0 + std::fabs(expected_margin)));
        CHECK(e.classification ==
              (i % 2 == 1 ? Stability::Saddle : Stability::Stable));
    }
    const Equilibrium& last = res.equilibria[3];
    CHECK(last.R > 0.5);
    CHECK(last.R < 2.0 / 3.0);
    CHECK(last.classification == Stability::Stable);
    CHECK(saddle_successor_violations(res.equilibria).empty());

    // Root multiplicity confirmed by an independent dense sign scan of
    // f - g built from the model's own evaluator but not the finder.
    const double hi = m.pole() * (1.0 - 1e-9);
    int sign_changes = 0;
    double prev = m.infection(0.0).val - g_threshold(0.0, m.k());
    const int N = 200000;
    for (int i = 1; i <= N; ++i) {
        double r = hi * static_cast<double>(i) / N;
        double v = m.infection(r).val - g_threshold(r, m.k());
        if ((v > 0.0) != (prev > 0.0)) ++sign_changes;
        prev = v;
    }
    CHECK(sign_changes == 4);
}

TEST_CASE("tangential touch is reported as a possible tangency, not a root") {
    // f equals the threshold function minus a shallow parabola touching
    // zero at R = 0.3: no sign change anywhere, one near-zero dip.
    Model m(3.0, expression_rate("(k - 1)/((k - 1)/k - R) - 0.1*(R - 0.3)^2"));
    FinderResult res = find_endemic_equilibria(m);
    CHECK(res.equilibria.empty());
    REQUIRE(res.possible_tangencies.size() == 1);
    CHECK(std::fabs(res.possible_tangencies[0] - 0.3) <= 2e-4);
}

TEST_CASE("saddle ordering violations are flagged") {
    auto eq = [](double r, Stability s) {
        Equilibrium e;
        e.kind = Equilibrium::Kind::Endemic;
        e.R = r;
        e.I = r / 3.0;
        e.classification = s;
        return e;
    };
    CHECK(saddle_successor_violations({}).empty());
    CHECK(saddle_successor_violations({eq(0.2, Stability::Saddle),
                                       eq(0.3, Stability::Stable)})
              .empty());
    auto bad = saddle_successor_violations({eq(0.2, Stability::Stable),
                                            eq(0.3, Stability::Saddle)});
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == 1);
    // A trailing saddle violates even with a stable state before it.
    auto tail = saddle_successor_violations({eq(0.25, Stability::Saddle)});
    REQUIRE(tail.size() == 1);
    CHECK(tail[0] == 0);
}

TEST_CASE("classification sign test exposed directly") {
    Model m = constant_model(12.0, 4.0);
    CHECK(classify_endemic(0.5, m) == Stability::Stable);
    // With an absurdly wide dead band every margin ties: Degenerate.
    CHECK(classify_endemic(0.5, m, 100.0) == Stability::Degenerate);
}

TEST_CASE("finder rejects unusable grids") {
    Model m = constant_model(12.0, 4.0);
    FinderOptions opt;
    opt.grid_points = 1;
    CHECK_THROWS_AS(find_endemic_equilibria(m, opt), SpecError);
    CHECK_THROWS_AS(existence_certificate(m, 1), SpecError);
}
