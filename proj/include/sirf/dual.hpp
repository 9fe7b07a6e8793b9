#pragma once

#include <cmath>

namespace sirf {

/// First-order dual number: value plus derivative with respect to a single
/// seed variable.  Arithmetic on Dual propagates derivatives exactly
/// (forward-mode AD), so f and f' come out of one evaluation pass with no
/// finite-difference truncation error.
struct Dual {
    double val = 0.0;
    double der = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double v, double d = 0.0) : val(v), der(d) {}

    /// The seed variable itself: value v, derivative 1.
    static constexpr Dual variable(double v) { return Dual(v, 1.0); }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.val + b.val, a.der + b.der}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.val - b.val, a.der - b.der}; }
constexpr Dual operator-(Dual a) { return {-a.val, -a.der}; }
constexpr Dual operator*(Dual a, Dual b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
}
constexpr Dual operator/(Dual a, Dual b) {
    return {a.val / b.val, (a.der * b.val - a.val * b.der) / (b.val * b.val)};
}

constexpr Dual operator+(double a, Dual b) { return Dual(a) + b; }
constexpr Dual operator+(Dual a, double b) { return a + Dual(b); }
constexpr Dual operator-(double a, Dual b) { return Dual(a) - b; }
constexpr Dual operator-(Dual a, double b) { return a - Dual(b); }
constexpr Dual operator*(double a, Dual b) { return Dual(a) * b; }
constexpr Dual operator*(Dual a, double b) { return a * Dual(b); }
constexpr Dual operator/(double a, Dual b) { return Dual(a) / b; }
constexpr Dual operator/(Dual a, double b) { return a / Dual(b); }

inline Dual sin(Dual a) { return {std::sin(a.val), std::cos(a.val) * a.der}; }
inline Dual cos(Dual a) { return {std::cos(a.val), -std::sin(a.val) * a.der}; }
inline Dual exp(Dual a) {
    double e = std::exp(a.val);
    return {e, e * a.der};
}
inline Dual tanh(Dual a) {
    double t = std::tanh(a.val);
    return {t, (1.0 - t * t) * a.der};
}

// log and sqrt follow IEEE semantics outside their domain (NaN/Inf); the
// expression evaluator checks arguments first and reports a located error
// instead of letting a NaN escape.
inline Dual log(Dual a) { return {std::log(a.val), a.der / a.val}; }
inline Dual sqrt(Dual a) {
    double s = std::sqrt(a.val);
    return {s, a.der / (2.0 * s)};
}

/// a^n for integer n, derivative n*a^(n-1)*a'.  Separated from the general
/// power because it is defined for negative bases as well.
inline Dual pow_int(Dual a, long long n) {
    double v = std::pow(a.val, static_cast<double>(n));
    double d = (n == 0) ? 0.0
                        : static_cast<double>(n) *
                              std::pow(a.val, static_cast<double>(n - 1)) * a.der;
    return {v, d};
}

/// a^b for positive base; caller guarantees a.val > 0.
inline Dual pow_general(Dual a, Dual b) {
    double v = std::pow(a.val, b.val);
    double d = v * (b.der * std::log(a.val) + b.val * a.der / a.val);
    return {v, d};
}

} // namespace sirf
