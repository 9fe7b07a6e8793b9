#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sirf/dual.hpp"
#include "sirf/expr.hpp"

namespace sirf {

/// An infection rate f(R): evaluable together with its derivative at any r.
/// Backed by a parsed expression, a constant, or a purpose-built curve from
/// one of the scenario constructions.  Cheap to copy (shared immutable
/// implementation), safe to evaluate concurrently.
class InfectionRate {
public:
    class Impl {
    public:
        virtual ~Impl() = default;
        virtual Dual eval(double r, double k) const = 0;
        /// JSON description that a model file would use to reconstruct
        /// this rate, e.g. {"kind":"expr","text":"kR^2+2k"}.
        virtual nlohmann::ordered_json spec() const = 0;
        /// The constant value when f does not depend on R at all.
        virtual std::optional<double> constant_value() const { return std::nullopt; }
    };

    explicit InfectionRate(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    Dual eval(double r, double k) const { return impl_->eval(r, k); }
    double value(double r, double k) const { return impl_->eval(r, k).val; }
    nlohmann::ordered_json spec() const { return impl_->spec(); }
    std::optional<double> constant_value() const { return impl_->constant_value(); }

private:
    std::shared_ptr<const Impl> impl_;
};

/// Rate backed by a parsed expression in R (and optionally k, pi).
InfectionRate expression_rate(ExprAst ast);
InfectionRate expression_rate(std::string_view text);

/// Constant rate f(R) = beta_tilde.  Throws SpecError unless beta_tilde > 0.
InfectionRate constant_rate(double beta_tilde);

/// Sample a rate on grid_points uniform points covering [0, 1] and report
/// whether all values are strictly positive (same contract as the
/// expression-level overload).
PositivityCheck check_positive(const InfectionRate& f, double k, int grid_points);

} // namespace sirf
