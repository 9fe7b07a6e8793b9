#pragma once

#include <array>
#include <complex>
#include <optional>

#include "sirf/dual.hpp"
#include "sirf/infection_rate.hpp"

namespace sirf {

// Dimensionless SIR model with a recovery-dependent infection rate f(R):
//
//   I' = I * (f(R) * (1 - I - R) - k)
//   R' = (k - 1) * I - R
//
// with k > 1 the combined removal/recovery parameter.  The reduced 2-D form
// lives on the simplex {I >= 0, R >= 0, I + R <= 1}; the 3-D form carries S
// explicitly and is used to cross-check the reduction (S + I + R stays 1).

/// Rates mu (mortality/demography) and gamma (recovery) of the
/// time-dimensional model, both positive.
struct RawRates {
    double mu = 0.0;
    double gamma = 0.0;
};

/// Dimensionless parameters derived from raw rates.
struct Redimensionalized {
    double k = 0.0;                    // 1 + gamma/mu, always > 1
    std::optional<double> beta_tilde;  // beta/mu when a constant beta is given
    std::optional<double> r0;          // beta_tilde/k, basic reproduction number
};

/// Convert raw rates (and optionally a constant transmission rate beta) to
/// dimensionless form.  Throws SpecError unless mu > 0 and gamma > 0.
Redimensionalized redimensionalize(const RawRates& raw,
                                   std::optional<double> beta = std::nullopt);

struct State2 {
    double I = 0.0;
    double R = 0.0;
};

struct State3 {
    double S = 0.0;
    double I = 0.0;
    double R = 0.0;
};

struct Rates2 {
    double dI = 0.0;
    double dR = 0.0;
};

struct Rates3 {
    double dS = 0.0;
    double dI = 0.0;
    double dR = 0.0;
};

/// Parameter k plus the infection-rate function.  Validates k > 1 on
/// construction.  Immutable; safe to share across threads.
class Model {
public:
    Model(double k, InfectionRate f);

    double k() const { return k_; }
    const InfectionRate& f() const { return f_; }

    /// f and df/dR at r in one evaluation.
    Dual infection(double r) const { return f_.eval(r, k_); }

    /// Location of the vertical asymptote of the threshold function:
    /// (k-1)/k.  Endemic equilibria can only occur left of it.
    double pole() const { return (k_ - 1.0) / k_; }

private:
    double k_;
    InfectionRate f_;
};

/// Threshold function g(r) = (k-1) / ((k-1)/k - r).  An endemic equilibrium
/// is exactly a solution of f(r) = g(r) with 0 < r < (k-1)/k.  Throws
/// NumericError when r is within 1e-12 of the pole.
double g_threshold(double r, double k);

/// g and dg/dr together.  Same pole guard as the scalar version.
Dual g_threshold(Dual r, double k);

Rates2 vector_field(const State2& s, const Model& m);
Rates3 vector_field(const State3& s, const Model& m);

/// 2x2 Jacobian of the reduced vector field, row-major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

Mat2 jacobian(const State2& s, const Model& m);

/// Eigenvalues of a 2x2 matrix in closed form, sorted by (real, imag)
/// ascending so the order is deterministic.
std::array<std::complex<double>, 2> eigenvalues(const Mat2& j);

/// Divergence of the field rescaled by 1/I:  -f(R) - 1/I.  Strictly
/// negative on the interior whenever f is positive, which rules out closed
/// orbits.  Requires I > 0 (throws SpecError otherwise).
double dulac_divergence(const State2& s, const Model& m);

} // namespace sirf
