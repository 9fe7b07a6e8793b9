#include "sirf/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"

namespace sirf {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Saddle: return "saddle";
        case Stability::Degenerate: return "degenerate";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

const char* to_string(UniquenessVerdict v) {
    switch (v) {
        case UniquenessVerdict::NoEndemic: return "no-endemic";
        case UniquenessVerdict::UniqueStable: return "unique-stable";
        case UniquenessVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(GlobalVerdict v) {
    switch (v) {
        case GlobalVerdict::StableDiseaseFree: return "globally-stable-disease-free";
        case GlobalVerdict::StableEndemic: return "globally-stable-endemic";
        case GlobalVerdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// h(r) = f(r) - g(r); its zeros on (0, pole) are the endemic R-coordinates.
double crossing_gap(const Model& m, double r) {
    return m.f().value(r, m.k()) - g_threshold(r, m.k());
}

// |f - g| below this at a grid point, with no sign change around it, is
// reported as a possible tangency.
constexpr double kTangencyTol = 1e-8;

// Bisection refines until |f - g| at the midpoint is at or below this, so
// a reported root really is a crossing to working precision.
constexpr double kResidualTarget = 1e-10;

double bisect(const Model& m, double lo, double hi, double v_lo, double tol) {
    // invariant: sign(h(lo)) == sign(v_lo) != sign(h(hi)), both nonzero
    double mid = 0.5 * (lo + hi);
    while (true) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval collapsed to adjacent doubles
        double v = crossing_gap(m, mid);
        if (v == 0.0) return mid;
        bool same_side = (v > 0.0) == (v_lo > 0.0);
        if (same_side) {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
        }
        // Keep halving past the width target until the residual is small
        // too; near-vertical crossings (|h'| ~ 1e3) need the extra digits.
        if (hi - lo <= tol && std::abs(crossing_gap(m, 0.5 * (lo + hi))) <= kResidualTarget)
            break;
    }
    return 0.5 * (lo + hi);
}

Equilibrium make_endemic(const Model& m, double r_star, double tie_tol) {
    Equilibrium e;
    e.kind = Equilibrium::Kind::Endemic;
    // Store I first and rebuild R from it so that I*(k-1) == R holds
    // bit-exactly in the published record.
    e.I = r_star / (m.k() - 1.0);
    e.R = e.I * (m.k() - 1.0);

    Dual f = m.infection(e.R);
    Dual g = g_threshold(Dual::variable(e.R), m.k());
    e.f_value = f.val;
    e.f_deriv = f.der;
    e.g_deriv = g.der;
    e.residual = std::abs(f.val - g.val);
    e.stability_margin = f.der - f.val * f.val / (m.k() - 1.0);
    if (std::abs(e.stability_margin) <= tie_tol) {
        e.classification = Stability::Degenerate;
    } else {
        e.classification = e.stability_margin < 0.0 ? Stability::Stable
                                                    : Stability::Saddle;
    }
    e.eigenvalues = eigenvalues(jacobian({e.I, e.R}, m));
    return e;
}

} // namespace

FinderResult find_endemic_equilibria(const Model& m, const FinderOptions& opt) {
    if (opt.grid_points < 2) {
        throw SpecError("find_endemic_equilibria: grid_points must be >= 2");
    }
    const double pole = m.pole();
    // Stop the scan a hair short of the pole; g blows up there, so any
    // crossing this close is outside what floating point can resolve.
    const double hi = pole * (1.0 - 1e-9);
    const std::size_t n = static_cast<std::size_t>(opt.grid_points);

    std::vector<double> xs(n);
    std::vector<double> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
        vs[i] = crossing_gap(m, xs[i]);
    }

    std::vector<double> roots;
    std::vector<bool> near_zero(n, false);

    for (std::size_t i = 0; i < n; ++i) {
        if (vs[i] == 0.0) {
            roots.push_back(xs[i]);
        } else if (std::abs(vs[i]) < kTangencyTol) {
            near_zero[i] = true;
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = vs[i];
        double b = vs[i + 1];
        if (a == 0.0 || b == 0.0) continue; // endpoint root already taken
        if ((a > 0.0) != (b > 0.0)) {
            roots.push_back(bisect(m, xs[i], xs[i + 1], a, opt.tol));
            // a sign change is a genuine crossing, not a tangency
            near_zero[i] = false;
            near_zero[i + 1] = false;
        }
    }

    std::sort(roots.begin(), roots.end());
    // merge duplicates from overlapping brackets or exact grid hits
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > std::max(2.0 * opt.tol, 1e-11)) {
            merged.push_back(r);
        }
    }

    FinderResult out;
    out.equilibria.reserve(merged.size());
    for (double r : merged) {
        if (r <= 0.0) continue; // R = 0 is the disease-free state, not endemic
        out.equilibria.push_back(make_endemic(m, r, opt.tie_tol));
    }

    // collapse runs of consecutive near-zero grid points, keeping the
    // point with the smallest |f - g| as the representative
    for (std::size_t i = 0; i < n;) {
        if (!near_zero[i]) {
            ++i;
            continue;
        }
        std::size_t best = i;
        std::size_t j = i;
        while (j < n && near_zero[j]) {
            if (std::abs(vs[j]) < std::abs(vs[best])) best = j;
            ++j;
        }
        out.possible_tangencies.push_back(xs[best]);
        i = j;
    }

    return out;
}

Stability classify_endemic(double r_star, const Model& m, double tie_tol) {
    Dual f = m.infection(r_star);
    double margin = f.der - f.val * f.val / (m.k() - 1.0);
    if (std::abs(margin) <= tie_tol) return Stability::Degenerate;
    return margin < 0.0 ? Stability::Stable : Stability::Saddle;
}

Equilibrium disease_free_equilibrium(const Model& m, double tie_tol) {
    Equilibrium e;
    e.kind = Equilibrium::Kind::DiseaseFree;
    e.I = 0.0;
    e.R = 0.0;
    Dual f = m.infection(0.0);
    e.f_value = f.val;
    e.f_deriv = f.der;
    e.g_deriv = 0.0;
    e.residual = 0.0;
    e.stability_margin = f.val - m.k();
    if (std::abs(e.stability_margin) <= tie_tol) {
        e.classification = Stability::Marginal;
    } else {
        e.classification = e.stability_margin < 0.0 ? Stability::Stable
                                                    : Stability::Saddle;
    }
    // Jacobian at the origin is triangular; eigenvalues are exactly -1 and
    // f(0) - k.  The closed-form routine reproduces that to the last bit.
    e.eigenvalues = eigenvalues(jacobian({0.0, 0.0}, m));
    return e;
}

std::vector<std::size_t>
saddle_successor_violations(const std::vector<Equilibrium>& sorted_endemic) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < sorted_endemic.size(); ++i) {
        if (sorted_endemic[i].classification != Stability::Saddle) continue;
        bool has_successor = false;
        for (std::size_t j = i + 1; j < sorted_endemic.size(); ++j) {
            if (sorted_endemic[j].R > sorted_endemic[i].R) {
                has_successor = true;
                break;
            }
        }
        if (!has_successor) bad.push_back(i);
    }
    return bad;
}

ExistenceCertificate existence_certificate(const Model& m, int grid_points) {
    if (grid_points < 2) {
        throw SpecError("existence_certificate: grid_points must be >= 2");
    }
    ExistenceCertificate out;
    double f0 = m.f().value(0.0, m.k());
    // g(0) = k, so f(0) > k already exhibits the exceedance at r = 0.
    if (f0 > m.k()) {
        out.exists = true;
        out.witness_r = 0.0;
        out.rule = "f(0) > k, so f exceeds the threshold function at R = 0 and "
                   "must cross it before the pole";
        out.heuristic = false;
        return out;
    }
    const double hi = m.pole() * (1.0 - 1e-9);
    for (int i = 1; i < grid_points; ++i) {
        double r = hi * static_cast<double>(i) / (grid_points - 1);
        if (crossing_gap(m, r) > 0.0) {
            out.exists = true;
            out.witness_r = r;
            out.rule = "f(R) > g(R) at R = " + format_double(r) +
                       ", so a crossing lies between there and the pole";
            out.heuristic = false; // the witness evaluation is a proof
            return out;
        }
    }
    out.exists = false;
    out.rule = "no grid point with f(R) > g(R) found on [0, pole) with " +
               std::to_string(grid_points) + " samples";
    out.heuristic = true; // absence was only sampled
    return out;
}

Certificates global_certificates(const Model& m,
                                 const std::vector<Equilibrium>& endemic,
                                 int grid_points, double tie_tol) {
    Certificates out;
    out.existence = existence_certificate(m, grid_points);

    const double k = m.k();
    double f0 = m.f().value(0.0, k);

    // Monotonicity of f, sampled: constant rates pass with derivative
    // exactly zero, everything else is a grid heuristic.
    bool non_increasing = true;
    double worst_slope = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        double r = static_cast<double>(i) / (grid_points - 1);
        double d = m.infection(r).der;
        if (d > worst_slope) worst_slope = d;
        if (d > tie_tol) non_increasing = false;
    }
    bool is_constant = m.f().constant_value().has_value();

    if (non_increasing) {
        std::string basis = is_constant ? "f is constant"
                                        : "f' <= 0 at every sampled point";
        if (f0 < k - tie_tol) {
            out.uniqueness = UniquenessVerdict::NoEndemic;
            out.uniqueness_reason =
                basis + " and f(0) < k: no endemic equilibrium can exist";
        } else if (f0 > k + tie_tol) {
            out.uniqueness = UniquenessVerdict::UniqueStable;
            out.uniqueness_reason =
                basis + " and f(0) > k: exactly one endemic equilibrium, attracting";
        } else {
            out.uniqueness = UniquenessVerdict::Inconclusive;
            out.uniqueness_reason = basis + " but f(0) = k to within tolerance";
        }
        out.uniqueness_heuristic = !is_constant; // sampling was involved
    } else {
        out.uniqueness = UniquenessVerdict::Inconclusive;
        out.uniqueness_reason =
            "f is not non-increasing (f' reaches " + format_double(worst_slope) +
            " on the sampled grid); the finder reports " +
            std::to_string(endemic.size()) + " endemic " +
            (endemic.size() == 1 ? "equilibrium" : "equilibria");
        out.uniqueness_heuristic = true;
    }

    // Global verdicts.  Both rest on the finder's root census (sampled) and
    // on f being positive and continuously differentiable beyond [0, 1],
    // which only expression-level inspection could guarantee; flag them.
    if (f0 < k - tie_tol && endemic.empty()) {
        out.global = GlobalVerdict::StableDiseaseFree;
        out.global_rule =
            "f(0) < k and no endemic equilibrium found: every trajectory in the "
            "simplex tends to the disease-free state";
        out.global_heuristic = true;
    } else if (f0 > k + tie_tol && endemic.size() == 1) {
        const Equilibrium& e = endemic.front();
        if (std::abs(e.f_deriv - e.g_deriv) > tie_tol) {
            out.global = GlobalVerdict::StableEndemic;
            out.global_rule =
                "f(0) > k with a unique transversal crossing: every trajectory "
                "with I > 0 tends to the endemic equilibrium";
            out.global_heuristic = true;
        } else {
            out.global = GlobalVerdict::Unknown;
            out.global_rule = "the unique crossing is tangential to working "
                              "precision; transversality hypothesis fails";
            out.global_heuristic = true;
        }
    } else {
        out.global = GlobalVerdict::Unknown;
        if (endemic.size() > 1) {
            out.global_rule = "multiple endemic equilibria (" +
                              std::to_string(endemic.size()) +
                              "): no global verdict applies";
        } else if (f0 < k - tie_tol && !endemic.empty()) {
            out.global_rule = "f(0) < k yet endemic equilibria exist "
                              "(bistable configuration): no global verdict";
        } else if (std::abs(f0 - k) <= tie_tol) {
            out.global_rule = "f(0) = k to within tolerance: threshold case";
        } else {
            out.global_rule = "f(0) > k but the finder returned no roots; "
                              "the grid may be too coarse";
        }
        out.global_heuristic = true;
    }

    return out;
}

} // namespace sirf
