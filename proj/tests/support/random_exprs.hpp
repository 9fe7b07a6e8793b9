#pragma once

// Seeded random generator of infection-rate expression strings, shared by the
// fuzz tests and the acceptance checks.  Expressions are built so they are
// finite and smooth on r in [0, 1]: division denominators, log arguments and
// sqrt arguments are positive by construction, exp arguments are bounded, and
// exponents are small integer literals.  A probe pass rejects candidates whose
// value or derivative gets large enough to make finite differences
// ill-conditioned, so every returned string is safe for derivative checks.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sirf/expr.hpp"

namespace expr_fuzz {

class Generator {
  public:
    explicit Generator(unsigned seed) : rng_(seed) {}

    // Returns `count` expression strings, each valid on r in [0,1] for the
    // accompanying k returned through `ks` (same indexing).
    std::vector<std::string> corpus(std::size_t count, std::vector<double>* ks = nullptr) {
        std::vector<std::string> out;
        out.reserve(count);
        if (ks != nullptr) ks->reserve(count);
        while (out.size() < count) {
            double k = uniform(1.2, 11.0);
            std::string text = expr(2);
            if (!probe_ok(text, k)) continue;
            out.push_back(text);
            if (ks != nullptr) ks->push_back(k);
        }
        return out;
    }

    std::string expr(int depth) { return sum(depth); }

  private:
    std::mt19937 rng_;

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::string literal(double lo, double hi) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", uniform(lo, hi));
        return buf;
    }

    std::string atom() {
        switch (pick(4)) {
            case 0: return "R";
            case 1: return "k";
            case 2: return "pi";
            default: return literal(0.1, 6.0);
        }
    }

    // Subexpression guaranteed >= 0.1 on [0,1].
    std::string positive(int depth) {
        if (depth <= 0) return literal(0.2, 4.0);
        switch (pick(4)) {
            case 0: return "((" + sum(depth - 1) + ")^2 + " + literal(0.1, 1.5) + ")";
            case 1: return "(tanh(" + sum(depth - 1) + ") + " + literal(1.1, 2.5) + ")";
            case 2: return "exp(" + bounded(depth - 1) + ")";
            default: return "(sin(" + sum(depth - 1) + ") + " + literal(1.1, 2.5) + ")";
        }
    }

    // Subexpression bounded to roughly [-3.5, 3.5] on [0,1].
    std::string bounded(int depth) {
        std::string inner = depth <= 0 ? atom() : sum(depth - 1);
        switch (pick(3)) {
            case 0: return "(" + literal(-3.0, 3.0) + "*sin(" + inner + "))";
            case 1: return "(" + literal(-3.0, 3.0) + "*tanh(" + inner + "))";
            default: return "(" + literal(-2.0, 2.0) + "*cos(" + inner + ") + " +
                            literal(-1.5, 1.5) + ")";
        }
    }

    std::string factor(int depth) {
        if (depth <= 0) return atom();
        switch (pick(8)) {
            case 0: return atom();
            case 1: return "sin(" + sum(depth - 1) + ")";
            case 2: return "cos(" + sum(depth - 1) + ")";
            case 3: return "tanh(" + sum(depth - 1) + ")";
            case 4: return "exp(" + bounded(depth - 1) + ")";
            case 5: return "log(" + positive(depth - 1) + ")";
            case 6: return "sqrt(" + positive(depth - 1) + ")";
            default:
                return "(" + factor(depth - 1) + ")^" + std::to_string(2 + pick(2));
        }
    }

    std::string product(int depth) {
        std::string lhs = factor(depth);
        switch (pick(4)) {
            case 0: return lhs + "*" + factor(depth - 1);
            case 1: return lhs + "/" + positive(depth - 1);
            default: return lhs;
        }
    }

    std::string sum(int depth) {
        std::string lhs = product(depth);
        switch (pick(4)) {
            case 0: return lhs + " + " + product(depth - 1);
            case 1: return lhs + " - " + product(depth - 1);
            case 2: return "-" + ("(" + lhs + ")");
            default: return lhs;
        }
    }

    // Rejects expressions that fail to evaluate or whose scale would make a
    // central-difference derivative check noisy.
    bool probe_ok(const std::string& text, double k) {
        try {
            sirf::ExprAst ast = sirf::parse_expr(text);
            for (int i = 0; i <= 256; ++i) {
                double r = 0.002 + (0.996 * i) / 256.0;
                sirf::Dual v = sirf::eval_dual(ast, r, k);
                if (!std::isfinite(v.val) || !std::isfinite(v.der)) return false;
                if (std::fabs(v.val) > 50.0 || std::fabs(v.der) > 500.0) return false;
            }
            return true;
        } catch (const std::exception&) {
            return false;
        }
    }
};

}  // namespace expr_fuzz
