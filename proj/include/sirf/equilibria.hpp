#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sirf/model.hpp"

namespace sirf {

/// Local character of an equilibrium of the reduced system.
///   Stable     - attracting (node or spiral)
///   Saddle     - one stable and one unstable direction
///   Degenerate - the transversality quantity is within tie_tol of zero;
///                the sign test cannot decide
///   Marginal   - disease-free state with f(0) within tie_tol of k
enum class Stability { Stable, Saddle, Degenerate, Marginal };

const char* to_string(Stability s);

struct Equilibrium {
    enum class Kind { DiseaseFree, Endemic };

    Kind kind = Kind::Endemic;
    double I = 0.0;
    double R = 0.0;
    Stability classification = Stability::Degenerate;

    // Diagnostics recorded at the equilibrium.
    double f_value = 0.0;
    double f_deriv = 0.0;
    double g_deriv = 0.0;          // endemic only; 0 for disease-free
    double stability_margin = 0.0; // endemic: f'(R*) - f(R*)^2/(k-1);
                                   // disease-free: f(0) - k
    double residual = 0.0;         // endemic: |f(R*) - g(R*)|
    std::array<std::complex<double>, 2> eigenvalues{};
};

struct FinderOptions {
    int grid_points = 4096;  // uniform samples of f - g on [0, pole)
    double tol = 1e-12;      // bisection bracket width target
    double tie_tol = 1e-8;   // classification dead band
};

struct FinderResult {
    /// Endemic equilibria sorted by R, classified, with I = R/(k-1).
    std::vector<Equilibrium> equilibria;
    /// Grid points where |f - g| < 1e-8 without a sign change nearby:
    /// possible tangencies the sign-based finder cannot certify either way.
    std::vector<double> possible_tangencies;
};

/// Locate all transversal crossings of f and the threshold function on
/// (0, (k-1)/k) by uniform-grid bracketing plus bisection.  Roots closer
/// together than the grid spacing may be missed; that caveat travels with
/// the result into reports.
FinderResult find_endemic_equilibria(const Model& m, const FinderOptions& opt = {});

/// Sign test at an endemic location r_star: the crossing is attracting when
/// f'(r_star) < f(r_star)^2/(k-1) and a saddle when '>'.  Within tie_tol of
/// equality: Degenerate.
Stability classify_endemic(double r_star, const Model& m, double tie_tol = 1e-8);

/// The disease-free state (0, 0): Stable when f(0) < k, Saddle when
/// f(0) > k, Marginal within tie_tol of the threshold.
Equilibrium disease_free_equilibrium(const Model& m, double tie_tol = 1e-8);

/// A Saddle in the sorted endemic list must be followed by another endemic
/// equilibrium at larger R (the flow re-enters from the right).  Returns
/// the indices of saddles violating that, empty when consistent.
std::vector<std::size_t>
saddle_successor_violations(const std::vector<Equilibrium>& sorted_endemic);

/// Outcome of the endemic-existence search.  When found, witness_r is a
/// point with f(witness_r) > g(witness_r), which pins a crossing to the
/// interval (witness_r, (k-1)/k); that is an actual proof, so heuristic is
/// false.  A negative result only says the sampled grid saw no exceedance.
struct ExistenceCertificate {
    bool exists = false;
    std::optional<double> witness_r;
    std::string rule;
    bool heuristic = true;
};

ExistenceCertificate existence_certificate(const Model& m, int grid_points = 4096);

enum class UniquenessVerdict { NoEndemic, UniqueStable, Inconclusive };
enum class GlobalVerdict { StableDiseaseFree, StableEndemic, Unknown };

const char* to_string(UniquenessVerdict v);
const char* to_string(GlobalVerdict v);

/// Certificate bundle attached to an analysis report.  Every rule states
/// its hypotheses; verdicts that rest on grid sampling (monotonicity,
/// absence of roots) are flagged heuristic.
struct Certificates {
    ExistenceCertificate existence;

    UniquenessVerdict uniqueness = UniquenessVerdict::Inconclusive;
    std::string uniqueness_reason;
    bool uniqueness_heuristic = true;

    GlobalVerdict global = GlobalVerdict::Unknown;
    std::string global_rule;
    bool global_heuristic = true;
};

Certificates global_certificates(const Model& m,
                                 const std::vector<Equilibrium>& endemic,
                                 int grid_points = 4096, double tie_tol = 1e-8);

} // namespace sirf
