#include "hierstab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

namespace hierstab {

namespace {
constexpr std::size_t kNoOffset = std::numeric_limits<std::size_t>::max();
}

enum class Fun { Exp, Log, Sin, Cos, Sqrt };
enum class Cmp { Lt, Le, Gt, Ge };

struct Expr::Node {
    enum Kind { Num, Variable, Add, Sub, Mul, Div, Pow, Neg, Func, Piecewise } kind;
    double num = 0.0;
    int ipow = 0;
    Fun fun = Fun::Exp;
    Var var = Var::S;
    Cmp cmp = Cmp::Le;
    std::size_t offset = kNoOffset;
    NodeP a, b, c, d;  // piecewise: (a cmp b) ? c : d
};

using Node = Expr::Node;
using NodeP = Expr::NodeP;

namespace {

NodeP num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Num;
    n->num = v;
    return n;
}

bool is_num(const NodeP& n, double v) { return n->kind == Node::Num && n->num == v; }

NodeP add(NodeP a, NodeP b) {
    if (a->kind == Node::Num && b->kind == Node::Num) return num(a->num + b->num);
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Add;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP neg(NodeP a) {
    if (a->kind == Node::Num) return num(-a->num);
    auto n = std::make_shared<Node>();
    n->kind = Node::Neg;
    n->a = std::move(a);
    return n;
}

NodeP sub(NodeP a, NodeP b) {
    if (a->kind == Node::Num && b->kind == Node::Num) return num(a->num - b->num);
    if (is_num(b, 0.0)) return a;
    if (is_num(a, 0.0)) return neg(b);
    auto n = std::make_shared<Node>();
    n->kind = Node::Sub;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP mul(NodeP a, NodeP b) {
    if (a->kind == Node::Num && b->kind == Node::Num) return num(a->num * b->num);
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Mul;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP divide(NodeP a, NodeP b, std::size_t off = kNoOffset) {
    if (is_num(a, 0.0)) return num(0.0);
    if (is_num(b, 1.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Div;
    n->a = std::move(a);
    n->b = std::move(b);
    n->offset = off;
    return n;
}

NodeP powi(NodeP a, int k) {
    if (k == 0) return num(1.0);
    if (k == 1) return a;
    if (a->kind == Node::Num) return num(std::pow(a->num, k));
    auto n = std::make_shared<Node>();
    n->kind = Node::Pow;
    n->a = std::move(a);
    n->ipow = k;
    return n;
}

NodeP fun(Fun f, NodeP a, std::size_t off = kNoOffset) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Func;
    n->fun = f;
    n->a = std::move(a);
    n->offset = off;
    return n;
}

bool node_uses(const Node& n, Var v) {
    if (n.kind == Node::Variable) return n.var == v;
    for (const NodeP* ch : {&n.a, &n.b, &n.c, &n.d})
        if (*ch && node_uses(**ch, v)) return true;
    return false;
}

double eval_node(const Node& n, double s, double q) {
    switch (n.kind) {
        case Node::Num: return n.num;
        case Node::Variable: return n.var == Var::S ? s : q;
        case Node::Add: return eval_node(*n.a, s, q) + eval_node(*n.b, s, q);
        case Node::Sub: return eval_node(*n.a, s, q) - eval_node(*n.b, s, q);
        case Node::Mul: return eval_node(*n.a, s, q) * eval_node(*n.b, s, q);
        case Node::Div: {
            double den = eval_node(*n.b, s, q);
            if (den == 0.0) throw EvalError("division by zero", n.offset);
            return eval_node(*n.a, s, q) / den;
        }
        case Node::Pow: return std::pow(eval_node(*n.a, s, q), n.ipow);
        case Node::Neg: return -eval_node(*n.a, s, q);
        case Node::Func: {
            double x = eval_node(*n.a, s, q);
            switch (n.fun) {
                case Fun::Exp: return std::exp(x);
                case Fun::Log:
                    if (x <= 0.0) throw EvalError("log of non-positive argument", n.offset);
                    return std::log(x);
                case Fun::Sin: return std::sin(x);
                case Fun::Cos: return std::cos(x);
                case Fun::Sqrt:
                    if (x < 0.0) throw EvalError("sqrt of negative argument", n.offset);
                    return std::sqrt(x);
            }
            break;
        }
        case Node::Piecewise: {
            double l = eval_node(*n.a, s, q);
            double r = eval_node(*n.b, s, q);
            bool take_then;
            switch (n.cmp) {
                // switch points count as satisfied in the "then" branch
                case Cmp::Lt:
                case Cmp::Le: take_then = l <= r; break;
                case Cmp::Gt:
                case Cmp::Ge: take_then = l >= r; break;
                default: take_then = false;
            }
            return take_then ? eval_node(*n.c, s, q) : eval_node(*n.d, s, q);
        }
    }
    throw EvalError("corrupt expression node", n.offset);
}

NodeP diff_node(const NodeP& n, Var v) {
    switch (n->kind) {
        case Node::Num: return num(0.0);
        case Node::Variable: return num(n->var == v ? 1.0 : 0.0);
        case Node::Add: return add(diff_node(n->a, v), diff_node(n->b, v));
        case Node::Sub: return sub(diff_node(n->a, v), diff_node(n->b, v));
        case Node::Mul:
            return add(mul(diff_node(n->a, v), n->b), mul(n->a, diff_node(n->b, v)));
        case Node::Div:
            return divide(sub(mul(diff_node(n->a, v), n->b), mul(n->a, diff_node(n->b, v))),
                          powi(n->b, 2), n->offset);
        case Node::Pow:
            return mul(mul(num(n->ipow), powi(n->a, n->ipow - 1)), diff_node(n->a, v));
        case Node::Neg: return neg(diff_node(n->a, v));
        case Node::Func: {
            NodeP da = diff_node(n->a, v);
            switch (n->fun) {
                case Fun::Exp: return mul(fun(Fun::Exp, n->a), da);
                case Fun::Log: return divide(da, n->a, n->offset);
                case Fun::Sin: return mul(fun(Fun::Cos, n->a), da);
                case Fun::Cos: return neg(mul(fun(Fun::Sin, n->a), da));
                case Fun::Sqrt:
                    return divide(da, mul(num(2.0), fun(Fun::Sqrt, n->a, n->offset)), n->offset);
            }
            break;
        }
        case Node::Piecewise: {
            auto r = std::make_shared<Node>(*n);
            r->c = diff_node(n->c, v);
            r->d = diff_node(n->d, v);
            return r;
        }
    }
    throw EvalError("corrupt expression node", n->offset);
}

void print_node(const Node& n, std::string& out) {
    char buf[40];
    switch (n.kind) {
        case Node::Num:
            std::snprintf(buf, sizeof buf, "%.17g", n.num);
            out += buf;
            return;
        case Node::Variable: out += (n.var == Var::S ? 's' : 'Q'); return;
        case Node::Add:
        case Node::Sub:
        case Node::Mul:
        case Node::Div: {
            const char* op = n.kind == Node::Add ? "+" : n.kind == Node::Sub ? "-"
                             : n.kind == Node::Mul ? "*" : "/";
            out += '(';
            print_node(*n.a, out);
            out += op;
            print_node(*n.b, out);
            out += ')';
            return;
        }
        case Node::Pow:
            out += '(';
            print_node(*n.a, out);
            out += ")^";
            if (n.ipow < 0) out += '-';
            out += std::to_string(std::abs(n.ipow));
            return;
        case Node::Neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            return;
        case Node::Func: {
            const char* name = n.fun == Fun::Exp ? "exp" : n.fun == Fun::Log ? "log"
                               : n.fun == Fun::Sin ? "sin" : n.fun == Fun::Cos ? "cos" : "sqrt";
            out += name;
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        }
        case Node::Piecewise: {
            const char* op = n.cmp == Cmp::Lt ? "<" : n.cmp == Cmp::Le ? "<="
                             : n.cmp == Cmp::Gt ? ">" : ">=";
            out += "piecewise(";
            print_node(*n.a, out);
            out += op;
            print_node(*n.b, out);
            out += ',';
            print_node(*n.c, out);
            out += ',';
            print_node(*n.d, out);
            out += ')';
            return;
        }
    }
}

// ---- parser ----------------------------------------------------------------

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    NodeP run() {
        NodeP e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, pos_);
    }

    NodeP expr() {
        NodeP e = term();
        for (;;) {
            if (accept('+')) e = add(e, term());
            else if (peek() == '-' && (++pos_, true)) e = sub(e, term());
            else return e;
        }
    }

    NodeP term() {
        NodeP e = unary();
        for (;;) {
            std::size_t at = pos_;
            if (accept('*')) e = mul(e, unary());
            else if (accept('/')) {
                NodeP d = divide(e, unary(), at);
                e = d;
            } else return e;
        }
    }

    NodeP unary() {
        if (accept('-')) return neg(unary());
        return power();
    }

    NodeP power() {
        NodeP base = primary();
        if (accept('^')) {
            skip_ws();
            bool negexp = accept('-');
            std::size_t at = pos_;
            skip_ws();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw ParseError("exponent must be an integer literal", at);
            long k = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                k = k * 10 + (src_[pos_++] - '0');
            return powi(std::move(base), static_cast<int>(negexp ? -k : k));
        }
        return base;
    }

    NodeP primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodeP e = expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_lit();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodeP number_lit() {
        const char* start = src_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        if (end == start) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - start);
        return num(v);
    }

    NodeP identifier() {
        std::size_t at = pos_;
        std::string id;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
            id += src_[pos_++];
        if (id == "s" || id == "Q") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Variable;
            n->var = id == "s" ? Var::S : Var::Q;
            n->offset = at;
            return n;
        }
        Fun f;
        if (id == "exp") f = Fun::Exp;
        else if (id == "log") f = Fun::Log;
        else if (id == "sin") f = Fun::Sin;
        else if (id == "cos") f = Fun::Cos;
        else if (id == "sqrt") f = Fun::Sqrt;
        else if (id == "piecewise") return piecewise(at);
        else throw ParseError("unknown identifier '" + id + "'", at);
        expect('(', "'(' after function name");
        NodeP a = expr();
        expect(')', "')'");
        return fun(f, std::move(a), at);
    }

    NodeP piecewise(std::size_t at) {
        expect('(', "'(' after piecewise");
        NodeP lhs = expr();
        skip_ws();
        Cmp cmp;
        if (accept('<')) cmp = accept('=') ? Cmp::Le : Cmp::Lt;
        else if (accept('>')) cmp = accept('=') ? Cmp::Ge : Cmp::Gt;
        else throw ParseError("expected comparison in piecewise condition", pos_);
        NodeP rhs = expr();
        expect(',', "','");
        NodeP then_e = expr();
        expect(',', "','");
        NodeP else_e = expr();
        expect(')', "')'");
        bool s_used = node_uses(*lhs, Var::S) || node_uses(*rhs, Var::S);
        bool q_used = node_uses(*lhs, Var::Q) || node_uses(*rhs, Var::Q);
        if (s_used && q_used)
            throw ParseError("piecewise condition may depend on s or Q but not both", at);
        auto n = std::make_shared<Node>();
        n->kind = Node::Piecewise;
        n->cmp = cmp;
        n->offset = at;
        n->a = std::move(lhs);
        n->b = std::move(rhs);
        n->c = std::move(then_e);
        n->d = std::move(else_e);
        return n;
    }
};

}  // namespace

Expr Expr::parse(const std::string& src) { return Expr(Parser(src).run()); }

Expr Expr::number(double v) { return Expr(num(v)); }

double Expr::eval(double s, double q) const {
    double v = eval_node(*node_, s, q);
    if (!std::isfinite(v)) throw EvalError("non-finite expression value", node_->offset);
    return v;
}

Expr Expr::diff(Var v) const { return Expr(diff_node(node_, v)); }

std::string Expr::str() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

bool Expr::uses(Var v) const { return node_uses(*node_, v); }

bool Expr::is_zero() const { return node_->kind == Node::Num && node_->num == 0.0; }

}  // namespace hierstab
