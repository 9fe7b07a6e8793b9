#include "sirf/model.hpp"

#include <cmath>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"

namespace sirf {

Redimensionalized redimensionalize(const RawRates& raw, std::optional<double> beta) {
    if (!(raw.mu > 0.0)) {
        throw SpecError("mu must be positive, got " + format_double(raw.mu));
    }
    if (!(raw.gamma > 0.0)) {
        throw SpecError("gamma must be positive, got " + format_double(raw.gamma));
    }
    Redimensionalized out;
    out.k = 1.0 + raw.gamma / raw.mu;
    if (beta) {
        if (!(*beta > 0.0)) {
            throw SpecError("beta must be positive, got " + format_double(*beta));
        }
        out.beta_tilde = *beta / raw.mu;
        out.r0 = *out.beta_tilde / out.k;
    }
    return out;
}

Model::Model(double k, InfectionRate f) : k_(k), f_(std::move(f)) {
    if (!(k > 1.0)) {
        throw SpecError("model parameter k must be > 1, got " + format_double(k));
    }
}

namespace {

constexpr double kPoleGuard = 1e-12;

[[noreturn]] void pole_error(double r, double k) {
    throw NumericError("threshold function evaluated at its pole: r = " +
                       format_double(r) + " with (k-1)/k = " +
                       format_double((k - 1.0) / k));
}

} // namespace

double g_threshold(double r, double k) {
    double pole = (k - 1.0) / k;
    double den = pole - r;
    if (std::abs(den) < kPoleGuard) pole_error(r, k);
    return (k - 1.0) / den;
}

Dual g_threshold(Dual r, double k) {
    double pole = (k - 1.0) / k;
    if (std::abs(pole - r.val) < kPoleGuard) pole_error(r.val, k);
    return (k - 1.0) / (pole - r);
}

Rates2 vector_field(const State2& s, const Model& m) {
    double f = m.f().value(s.R, m.k());
    Rates2 out;
    out.dI = s.I * (f * (1.0 - s.I - s.R) - m.k());
    out.dR = (m.k() - 1.0) * s.I - s.R;
    return out;
}

Rates3 vector_field(const State3& s, const Model& m) {
    double f = m.f().value(s.R, m.k());
    Rates3 out;
    // In dimensionless time the birth inflow is 1 (all into S) and each
    // compartment decays at rate 1; infection moves S->I at f(R)*S*I and
    // recovery moves I->R at (k-1)*I.
    out.dS = 1.0 - f * s.S * s.I - s.S;
    out.dI = f * s.S * s.I - m.k() * s.I;
    out.dR = (m.k() - 1.0) * s.I - s.R;
    return out;
}

Mat2 jacobian(const State2& s, const Model& m) {
    Dual f = m.infection(s.R);
    Mat2 j;
    j.a11 = f.val * (1.0 - s.I - s.R) - m.k() - s.I * f.val;
    j.a12 = s.I * (f.der * (1.0 - s.I - s.R) - f.val);
    j.a21 = m.k() - 1.0;
    j.a22 = -1.0;
    return j;
}

std::array<std::complex<double>, 2> eigenvalues(const Mat2& j) {
    // Triangular matrices (the disease-free Jacobian has a12 = 0) carry
    // their spectrum on the diagonal; returning it directly avoids the
    // rounding the quadratic formula would introduce near a double root.
    if (j.a12 == 0.0 || j.a21 == 0.0) {
        double lo = std::min(j.a11, j.a22);
        double hi = std::max(j.a11, j.a22);
        return {std::complex<double>{lo, 0.0}, std::complex<double>{hi, 0.0}};
    }
    // Roots of x^2 - tr x + det.
    double half_tr = 0.5 * (j.a11 + j.a22);
    double disc = half_tr * half_tr - j.det();
    std::array<std::complex<double>, 2> eig;
    if (disc >= 0.0) {
        double gap = std::sqrt(disc);
        eig[0] = {half_tr - gap, 0.0};
        eig[1] = {half_tr + gap, 0.0};
    } else {
        double gap = std::sqrt(-disc);
        eig[0] = {half_tr, -gap};
        eig[1] = {half_tr, gap};
    }
    return eig;
}

double dulac_divergence(const State2& s, const Model& m) {
    if (!(s.I > 0.0)) {
        throw SpecError("dulac_divergence needs I > 0, got I = " +
                        format_double(s.I));
    }
    return -m.f().value(s.R, m.k()) - 1.0 / s.I;
}

} // namespace sirf
