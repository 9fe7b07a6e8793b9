#include "sirf/infection_rate.hpp"

#include <utility>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"

namespace sirf {

namespace {

class ExpressionRate final : public InfectionRate::Impl {
public:
    explicit ExpressionRate(ExprAst ast) : ast_(std::move(ast)) {}

    Dual eval(double r, double k) const override { return eval_dual(ast_, r, k); }

    nlohmann::ordered_json spec() const override {
        return {{"kind", "expr"}, {"text", ast_.source()}};
    }

private:
    ExprAst ast_;
};

class ConstantRate final : public InfectionRate::Impl {
public:
    explicit ConstantRate(double beta_tilde) : beta_tilde_(beta_tilde) {}

    Dual eval(double, double) const override { return Dual(beta_tilde_, 0.0); }

    nlohmann::ordered_json spec() const override {
        return {{"kind", "constant"}, {"beta_tilde", beta_tilde_}};
    }

    std::optional<double> constant_value() const override { return beta_tilde_; }

private:
    double beta_tilde_;
};

} // namespace

InfectionRate expression_rate(ExprAst ast) {
    return InfectionRate(std::make_shared<ExpressionRate>(std::move(ast)));
}

InfectionRate expression_rate(std::string_view text) {
    return expression_rate(parse_expr(text));
}

InfectionRate constant_rate(double beta_tilde) {
    if (!(beta_tilde > 0.0)) {
        throw SpecError("constant rate must be positive, got " +
                        format_double(beta_tilde));
    }
    return InfectionRate(std::make_shared<ConstantRate>(beta_tilde));
}

PositivityCheck check_positive(const InfectionRate& f, double k, int grid_points) {
    if (grid_points < 2) throw SpecError("check_positive: grid_points must be >= 2");
    PositivityCheck out;
    out.grid_points = grid_points;
    for (int i = 0; i < grid_points; ++i) {
        double r = static_cast<double>(i) / (grid_points - 1);
        double v = f.value(r, k);
        if (i == 0 || v < out.min_value) {
            out.min_value = v;
            out.min_at_r = r;
        }
    }
    out.positive = out.min_value > 0.0;
    return out;
}

} // namespace sirf
