#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "sirf/dual.hpp"

namespace sirf {

// Expression language for infection rates f(R).  Grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?          -- '^' binds right
//   unary   := '-'? primary                 -- so "-R^2" means (-R)^2
//   primary := number | 'R' | 'k' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt | tanh
//
// Note the unary rule: '-' attaches to the primary before '^' is applied,
// which differs from the usual convention.  The pretty-printer and all
// tests honour this.

enum class ExprKind {
    Number,
    VarR,   // the variable the expression is differentiated in
    ParamK, // substituted with the model's k at evaluation time
    Pi,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Call,
};

enum class FuncId { Sin, Cos, Exp, Log, Sqrt, Tanh };

const char* func_name(FuncId f);

/// One node of a parsed expression.  Trees are immutable after parsing and
/// may be shared freely across threads.
struct ExprNode {
    ExprKind kind;
    double number = 0.0;          // ExprKind::Number
    FuncId func = FuncId::Sin;    // ExprKind::Call
    std::unique_ptr<ExprNode> a;  // unary operand, left operand, call argument
    std::unique_ptr<ExprNode> b;  // right operand of binary operators
    std::size_t offset = 0;       // byte offset of the node's first token
};

/// Owning handle for a parsed expression together with its source text
/// (kept for error messages and for echoing the model back into reports).
class ExprAst {
public:
    ExprAst(std::unique_ptr<ExprNode> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    const ExprNode& root() const { return *root_; }
    const std::string& source() const { return source_; }

private:
    std::unique_ptr<ExprNode> root_;
    std::string source_;
};

/// Parse source text into an AST.  Throws ParseError with the byte offset
/// of the offending token and the set of tokens that were acceptable there.
ExprAst parse_expr(std::string_view text);

/// Evaluate value and d/dR in one pass via dual numbers.  Domain errors
/// (log of a non-positive value, division by zero, 0^negative, ...) throw
/// EvalError carrying the offending node's offset.
Dual eval_dual(const ExprAst& ast, double r, double k);

/// Result of sampling an expression on the uniform grid over [0, 1].
struct PositivityCheck {
    bool positive = false;  // every sampled value was > 0
    double min_value = 0.0; // smallest sampled value
    double min_at_r = 0.0;  // first grid point attaining it
    int grid_points = 0;
};

/// Sample ast on grid_points uniform points covering [0, 1] (endpoints
/// included) and report whether all values are strictly positive.  This is
/// a heuristic witness search, not a proof: a sign dip between grid points
/// goes unseen.  grid_points must be >= 2.
PositivityCheck check_positive(const ExprAst& ast, double k, int grid_points);

/// Render the tree back to source text that re-parses to a structurally
/// identical tree.  Parentheses are inserted exactly where the grammar
/// requires them (including around negations under '^').
std::string pretty_print(const ExprAst& ast);

/// Structural equality of two trees (numbers compared bit-exactly).
bool structurally_equal(const ExprNode& a, const ExprNode& b);

} // namespace sirf
