#include "sirf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"

namespace sirf {

const char* func_name(FuncId f) {
    switch (f) {
        case FuncId::Sin: return "sin";
        case FuncId::Cos: return "cos";
        case FuncId::Exp: return "exp";
        case FuncId::Log: return "log";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Tanh: return "tanh";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------- lexer --

enum class Tok {
    Number, R, K, Pi, Func,
    Plus, Minus, Star, Slash, Caret, LParen, RParen,
    End,
};

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    FuncId func = FuncId::Sin;
    std::string text; // identifier spelling, for error messages
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            // number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    ++k;
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(src.data() + start, src.data() + j, value);
            if (ec != std::errc{} || ptr != src.data() + j) {
                throw ParseError("malformed number at offset " + std::to_string(start),
                                 start, {"number"});
            }
            out.push_back({Tok::Number, start, value, FuncId::Sin, std::string(src.substr(start, j - start))});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word(src.substr(start, j - start));
            Token t;
            t.offset = start;
            t.text = word;
            if (word == "R") t.kind = Tok::R;
            else if (word == "k") t.kind = Tok::K;
            else if (word == "pi") t.kind = Tok::Pi;
            else if (word == "sin") { t.kind = Tok::Func; t.func = FuncId::Sin; }
            else if (word == "cos") { t.kind = Tok::Func; t.func = FuncId::Cos; }
            else if (word == "exp") { t.kind = Tok::Func; t.func = FuncId::Exp; }
            else if (word == "log") { t.kind = Tok::Func; t.func = FuncId::Log; }
            else if (word == "sqrt") { t.kind = Tok::Func; t.func = FuncId::Sqrt; }
            else if (word == "tanh") { t.kind = Tok::Func; t.func = FuncId::Tanh; }
            else {
                throw ParseError("unknown identifier '" + word + "' at offset " +
                                     std::to_string(start),
                                 start,
                                 {"number", "R", "k", "pi", "function", "("});
            }
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + c +
                                     "' at offset " + std::to_string(start),
                                 start, {});
        }
        out.push_back({kind, start, 0.0, FuncId::Sin, std::string(1, c)});
        ++i;
    }
    out.push_back({Tok::End, src.size(), 0.0, FuncId::Sin, ""});
    return out;
}

// --------------------------------------------------------------- parser --

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr make_node(ExprKind kind, std::size_t offset) {
    auto n = std::make_unique<ExprNode>();
    n->kind = kind;
    n->offset = offset;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(lex(src)) {}

    NodePtr run() {
        NodePtr e = expr();
        if (cur().kind != Tok::End) {
            fail("unexpected trailing input",
                 {"+", "-", "*", "/", "^", "end of input"});
        }
        return e;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) {
        const Token& t = cur();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError("syntax error at offset " + std::to_string(t.offset) + ": " +
                             what + " (found " + got + ")",
                         t.offset, std::move(expected));
    }

    void expect(Tok kind, const char* spelling) {
        if (cur().kind != kind) {
            fail(std::string("expected '") + spelling + "'", {spelling});
        }
        advance();
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
            Tok op = advance().kind;
            NodePtr rhs = term();
            NodePtr n = make_node(op == Tok::Plus ? ExprKind::Add : ExprKind::Sub,
                                  lhs->offset);
            n->a = std::move(lhs);
            n->b = std::move(rhs);
            lhs = std::move(n);
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (cur().kind == Tok::Star || cur().kind == Tok::Slash) {
            Tok op = advance().kind;
            NodePtr rhs = factor();
            NodePtr n = make_node(op == Tok::Star ? ExprKind::Mul : ExprKind::Div,
                                  lhs->offset);
            n->a = std::move(lhs);
            n->b = std::move(rhs);
            lhs = std::move(n);
        }
        return lhs;
    }

    // factor := unary ('^' factor)?   -- right associative
    NodePtr factor() {
        NodePtr base = unary();
        if (cur().kind == Tok::Caret) {
            advance();
            NodePtr exponent = factor();
            NodePtr n = make_node(ExprKind::Pow, base->offset);
            n->a = std::move(base);
            n->b = std::move(exponent);
            return n;
        }
        return base;
    }

    // unary := '-'? primary   -- the sign binds tighter than '^'
    NodePtr unary() {
        if (cur().kind == Tok::Minus) {
            std::size_t off = advance().offset;
            NodePtr n = make_node(ExprKind::Neg, off);
            n->a = primary();
            return n;
        }
        return primary();
    }

    NodePtr primary() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Number: {
                NodePtr n = make_node(ExprKind::Number, t.offset);
                n->number = t.number;
                advance();
                return n;
            }
            case Tok::R: advance(); return make_node(ExprKind::VarR, t.offset);
            case Tok::K: advance(); return make_node(ExprKind::ParamK, t.offset);
            case Tok::Pi: advance(); return make_node(ExprKind::Pi, t.offset);
            case Tok::Func: {
                NodePtr n = make_node(ExprKind::Call, t.offset);
                n->func = t.func;
                advance();
                expect(Tok::LParen, "(");
                n->a = expr();
                expect(Tok::RParen, ")");
                return n;
            }
            case Tok::LParen: {
                advance();
                NodePtr inner = expr();
                expect(Tok::RParen, ")");
                return inner; // grouping only; no node of its own
            }
            default:
                fail("expected a value", {"number", "R", "k", "pi", "function", "("});
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ------------------------------------------------------------ evaluator --

struct EvalCtx {
    double r;
    double k;
    const std::string* source;
};

[[noreturn]] void eval_fail(const ExprNode& n, const EvalCtx& ctx, const std::string& what) {
    std::string snippet;
    if (ctx.source && n.offset < ctx.source->size()) {
        snippet = ctx.source->substr(n.offset, 24);
        if (n.offset + 24 < ctx.source->size()) snippet += "...";
    }
    std::string msg = what + " at offset " + std::to_string(n.offset);
    if (!snippet.empty()) msg += " in '" + snippet + "'";
    throw EvalError(msg, n.offset);
}

bool is_integerish(double x) {
    return std::isfinite(x) && x == std::nearbyint(x) && std::abs(x) <= 1e15;
}

Dual eval_node(const ExprNode& n, const EvalCtx& ctx) {
    switch (n.kind) {
        case ExprKind::Number: return Dual(n.number);
        case ExprKind::VarR: return Dual::variable(ctx.r);
        case ExprKind::ParamK: return Dual(ctx.k);
        case ExprKind::Pi: return Dual(std::numbers::pi);
        case ExprKind::Neg: return -eval_node(*n.a, ctx);
        case ExprKind::Add: return eval_node(*n.a, ctx) + eval_node(*n.b, ctx);
        case ExprKind::Sub: return eval_node(*n.a, ctx) - eval_node(*n.b, ctx);
        case ExprKind::Mul: return eval_node(*n.a, ctx) * eval_node(*n.b, ctx);
        case ExprKind::Div: {
            Dual num = eval_node(*n.a, ctx);
            Dual den = eval_node(*n.b, ctx);
            if (den.val == 0.0) eval_fail(n, ctx, "division by zero");
            return num / den;
        }
        case ExprKind::Pow: {
            Dual base = eval_node(*n.a, ctx);
            Dual exponent = eval_node(*n.b, ctx);
            if (exponent.der == 0.0 && is_integerish(exponent.val)) {
                auto e = static_cast<long long>(exponent.val);
                if (base.val == 0.0 && e < 0)
                    eval_fail(n, ctx, "zero raised to a negative power");
                return pow_int(base, e);
            }
            if (base.val < 0.0)
                eval_fail(n, ctx, "negative base with non-integer exponent");
            if (base.val == 0.0) {
                if (exponent.der != 0.0)
                    eval_fail(n, ctx, "zero base with variable exponent");
                if (exponent.val <= 0.0)
                    eval_fail(n, ctx, "zero raised to a non-positive power");
                // 0^b for constant b > 1: value 0, derivative 0.  For
                // 0 < b < 1 the derivative blows up; refuse loudly.
                if (exponent.val < 1.0)
                    eval_fail(n, ctx, "derivative of 0^b unbounded for b < 1");
                return Dual(0.0, 0.0);
            }
            return pow_general(base, exponent);
        }
        case ExprKind::Call: {
            Dual arg = eval_node(*n.a, ctx);
            switch (n.func) {
                case FuncId::Sin: return sin(arg);
                case FuncId::Cos: return cos(arg);
                case FuncId::Exp: return exp(arg);
                case FuncId::Tanh: return tanh(arg);
                case FuncId::Log:
                    if (arg.val <= 0.0) {
                        eval_fail(n, ctx,
                                  "log of non-positive value (" +
                                      format_double(arg.val) + ")");
                    }
                    return log(arg);
                case FuncId::Sqrt:
                    if (arg.val < 0.0) {
                        eval_fail(n, ctx,
                                  "sqrt of negative value (" +
                                      format_double(arg.val) + ")");
                    }
                    if (arg.val == 0.0 && arg.der != 0.0)
                        eval_fail(n, ctx, "derivative of sqrt unbounded at 0");
                    if (arg.val == 0.0) return Dual(0.0, 0.0);
                    return sqrt(arg);
            }
            eval_fail(n, ctx, "unknown function");
        }
    }
    // unreachable; all kinds handled above
    throw NumericError("corrupt expression tree");
}

// -------------------------------------------------------------- printer --

// Binding strength as seen by the parser.  A child is parenthesized when
// its own strength is below what its slot requires.
enum Prec : int {
    PrecAddSub = 0,
    PrecMulDiv = 1,
    PrecPow = 2,
    PrecUnary = 3, // '-'? primary
    PrecAtom = 4,
};

int node_prec(const ExprNode& n) {
    switch (n.kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return PrecAddSub;
        case ExprKind::Mul:
        case ExprKind::Div: return PrecMulDiv;
        case ExprKind::Pow: return PrecPow;
        case ExprKind::Neg: return PrecUnary;
        default: return PrecAtom;
    }
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int slot_prec, std::string& out) {
    if (node_prec(child) < slot_prec) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprKind::Number: out += format_double(n.number); return;
        case ExprKind::VarR: out += 'R'; return;
        case ExprKind::ParamK: out += 'k'; return;
        case ExprKind::Pi: out += "pi"; return;
        case ExprKind::Call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        case ExprKind::Neg:
            out += '-';
            // operand must re-parse as a primary
            print_child(*n.a, PrecAtom, out);
            return;
        case ExprKind::Add:
        case ExprKind::Sub:
            print_child(*n.a, PrecAddSub, out);
            out += (n.kind == ExprKind::Add) ? " + " : " - ";
            // right operand sits in a 'term' slot (left associativity)
            print_child(*n.b, PrecMulDiv, out);
            return;
        case ExprKind::Mul:
        case ExprKind::Div:
            print_child(*n.a, PrecMulDiv, out);
            out += (n.kind == ExprKind::Mul) ? "*" : "/";
            print_child(*n.b, PrecPow, out);
            return;
        case ExprKind::Pow:
            // base sits in a 'unary' slot, exponent in a 'factor' slot
            print_child(*n.a, PrecUnary, out);
            out += '^';
            print_child(*n.b, PrecPow, out);
            return;
    }
}

} // namespace

ExprAst parse_expr(std::string_view text) {
    Parser p(text);
    return ExprAst(p.run(), std::string(text));
}

Dual eval_dual(const ExprAst& ast, double r, double k) {
    EvalCtx ctx{r, k, &ast.source()};
    return eval_node(ast.root(), ctx);
}

PositivityCheck check_positive(const ExprAst& ast, double k, int grid_points) {
    if (grid_points < 2) throw SpecError("check_positive: grid_points must be >= 2");
    PositivityCheck out;
    out.grid_points = grid_points;
    for (int i = 0; i < grid_points; ++i) {
        double r = static_cast<double>(i) / (grid_points - 1);
        double v = eval_dual(ast, r, k).val;
        if (i == 0 || v < out.min_value) {
            out.min_value = v;
            out.min_at_r = r;
        }
    }
    out.positive = out.min_value > 0.0;
    return out;
}

std::string pretty_print(const ExprAst& ast) {
    std::string out;
    print_node(ast.root(), out);
    return out;
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Number:
            // bit-exact, so -0 and 0 compare different on purpose
            return std::signbit(a.number) == std::signbit(b.number) &&
                   a.number == b.number;
        case ExprKind::VarR:
        case ExprKind::ParamK:
        case ExprKind::Pi: return true;
        case ExprKind::Neg: return structurally_equal(*a.a, *b.a);
        case ExprKind::Call:
            return a.func == b.func && structurally_equal(*a.a, *b.a);
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
        case ExprKind::Pow:
            return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    }
    return false;
}

} // namespace sirf
