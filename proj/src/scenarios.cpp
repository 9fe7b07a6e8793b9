#include "sirf/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"
#include "sirf/infection_rate.hpp"

namespace sirf {

namespace {

// Piecewise C^1 curve of the multistable family.  All segment data is
// precomputed at construction; evaluation just picks a segment.
class Example1Rate final : public InfectionRate::Impl {
public:
    Example1Rate(int n, double k, double f0) : n_(n), k_(k), f0_(f0) {
        double pole = (k - 1.0) / k;
        r_first_ = pole / (2.0 * n);
        r_last_ = (2.0 * n - 1.0) * pole / (2.0 * n);
        w_ = 2.0 * n * std::numbers::pi * k / (k - 1.0);

        // sin(w * R*_i) = sin(i*pi) = 0, so f meets g at every knot; the
        // slope of the ripple at the outermost knots is -w*cos(i*pi) = +w.
        Dual g_first = g_threshold(Dual::variable(r_first_), k);
        Dual g_last = g_threshold(Dual::variable(r_last_), k);
        v_first_ = g_first.val;
        d_first_ = g_first.der + w_;
        v_last_ = g_last.val;
        d_last_ = g_last.der + w_;
    }

    Dual eval(double r, double k) const override {
        if (std::abs(k - k_) > 1e-12 * k_) {
            throw NumericError("example1 curve built for k = " + format_double(k_) +
                               " evaluated with k = " + format_double(k));
        }
        Dual x = Dual::variable(r);
        if (r < r_first_) {
            // cubic Hermite between (0, f0, slope 0) and
            // (r_first, v_first, slope d_first)
            Dual t = x / r_first_;
            Dual t2 = t * t;
            Dual t3 = t2 * t;
            Dual h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
            Dual h01 = -2.0 * t3 + 3.0 * t2;
            Dual h11 = t3 - t2;
            return h00 * f0_ + h01 * v_first_ + h11 * (r_first_ * d_first_);
        }
        if (r <= r_last_) {
            return g_threshold(x, k_) - sin(w_ * x);
        }
        return v_last_ + d_last_ * (x - r_last_);
    }

    nlohmann::ordered_json spec() const override {
        return {{"kind", "example1"}, {"n", n_}, {"k", k_}, {"f0", f0_}};
    }

private:
    int n_;
    double k_;
    double f0_;
    double r_first_ = 0.0, r_last_ = 0.0;
    double w_ = 0.0;
    double v_first_ = 0.0, d_first_ = 0.0;
    double v_last_ = 0.0, d_last_ = 0.0;
};

// Quadratic rate f(R) = k*R^2 + 2k, derivative 2kR.
class Example2Rate final : public InfectionRate::Impl {
public:
    explicit Example2Rate(double k) : k_(k) {}

    Dual eval(double r, double k) const override {
        if (std::abs(k - k_) > 1e-12 * k_) {
            throw NumericError("example2 curve built for k = " + format_double(k_) +
                               " evaluated with k = " + format_double(k));
        }
        return Dual(k_ * r * r + 2.0 * k_, 2.0 * k_ * r);
    }

    nlohmann::ordered_json spec() const override {
        return {{"kind", "example2"}, {"k", k_}};
    }

private:
    double k_;
};

} // namespace

Model example1_model(const Example1Params& p) {
    if (p.n < 1) {
        throw SpecError("example1: n must be a positive integer, got " +
                        std::to_string(p.n));
    }
    if (!(p.k > 1.0)) {
        throw SpecError("example1: k must be > 1, got " + format_double(p.k));
    }
    double f0 = p.f0.value_or(p.k / 2.0);
    if (!(f0 > 0.0) || !(f0 < p.k)) {
        throw SpecError("example1: f0 must lie in (0, k), got f0 = " +
                        format_double(f0) + " with k = " + format_double(p.k));
    }

    InfectionRate rate(std::make_shared<Example1Rate>(p.n, p.k, f0));

    // The Hermite stretch is not positive by construction for every
    // parameter combination; self-check the assembled curve densely.
    PositivityCheck pc = check_positive(rate, p.k, 20001);
    if (!pc.positive) {
        throw NumericError("example1 construction failed its positivity check: "
                           "f(" + format_double(pc.min_at_r) + ") = " +
                           format_double(pc.min_value));
    }

    return Model(p.k, rate);
}

Model example2_model(double k) {
    if (!(k > 1.0)) {
        throw SpecError("example2: k must be > 1, got " + format_double(k));
    }
    return Model(k, InfectionRate(std::make_shared<Example2Rate>(k)));
}

Model constant_model(double beta_tilde, double k) {
    return Model(k, constant_rate(beta_tilde));
}

namespace {

double require_number(const nlohmann::ordered_json& obj, const char* key,
                      const char* kind) {
    if (!obj.contains(key)) {
        throw SpecError(std::string("scenario '") + kind + "': missing \"" +
                        key + "\"");
    }
    if (!obj.at(key).is_number()) {
        throw SpecError(std::string("scenario '") + kind + "': \"" + key +
                        "\" must be a number");
    }
    return obj.at(key).get<double>();
}

} // namespace

Model scenario_model(const nlohmann::ordered_json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
        throw SpecError("scenario must be an object with a \"kind\" string");
    }
    std::string kind = spec.at("kind").get<std::string>();
    if (kind == "example1") {
        Example1Params p;
        double n = require_number(spec, "n", "example1");
        if (n != std::floor(n) || n < 1.0 || n > 1e6) {
            throw SpecError("example1: n must be a positive integer, got " +
                            format_double(n));
        }
        p.n = static_cast<int>(n);
        p.k = require_number(spec, "k", "example1");
        if (spec.contains("f0")) p.f0 = require_number(spec, "f0", "example1");
        return example1_model(p);
    }
    if (kind == "example2") {
        return example2_model(require_number(spec, "k", "example2"));
    }
    if (kind == "constant") {
        return constant_model(require_number(spec, "beta_tilde", "constant"),
                              require_number(spec, "k", "constant"));
    }
    if (kind == "expr") {
        if (!spec.contains("text") || !spec.at("text").is_string()) {
            throw SpecError("scenario 'expr': missing \"text\" string");
        }
        double k = require_number(spec, "k", "expr");
        return Model(k, expression_rate(spec.at("text").get<std::string>()));
    }
    throw SpecError("unknown scenario kind \"" + kind + "\"");
}

} // namespace sirf
