#include "spinrep/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spinrep {

struct Expr::Node {
    enum class Kind { Num, Z, Zbar, Add, Sub, Mul, Div, Pow, Neg, Fun } kind;
    cplx value{};
    std::string fun;
    std::unique_ptr<Node> lhs, rhs;

    cplx eval(cplx z) const {
        switch (kind) {
            case Kind::Num: return value;
            case Kind::Z: return z;
            case Kind::Zbar: return std::conj(z);
            case Kind::Add: return lhs->eval(z) + rhs->eval(z);
            case Kind::Sub: return lhs->eval(z) - rhs->eval(z);
            case Kind::Mul: return lhs->eval(z) * rhs->eval(z);
            case Kind::Div: return lhs->eval(z) / rhs->eval(z);
            case Kind::Pow: return std::pow(lhs->eval(z), rhs->eval(z));
            case Kind::Neg: return -lhs->eval(z);
            case Kind::Fun: {
                cplx a = lhs->eval(z);
                if (fun == "exp") return std::exp(a);
                if (fun == "log") return std::log(a);
                if (fun == "sin") return std::sin(a);
                if (fun == "cos") return std::cos(a);
                if (fun == "tan") return std::tan(a);
                if (fun == "sinh") return std::sinh(a);
                if (fun == "cosh") return std::cosh(a);
                if (fun == "tanh") return std::tanh(a);
                if (fun == "sqrt") return std::sqrt(a);
                if (fun == "conj") return std::conj(a);
                if (fun == "re") return cplx(a.real(), 0);
                if (fun == "im") return cplx(a.imag(), 0);
                if (fun == "abs") return cplx(std::abs(a), 0);
                throw std::invalid_argument("expr: unknown function " + fun);
            }
        }
        return {};
    }
};

namespace {

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::unique_ptr<Expr::Node> parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw std::invalid_argument("expr: trailing input at " + rest());
        return e;
    }

  private:
    using NodePtr = std::unique_ptr<Expr::Node>;

    NodePtr expr() {
        auto e = term();
        for (;;) {
            skip_ws();
            if (accept('+')) e = binary(Expr::Node::Kind::Add, std::move(e), term());
            else if (accept('-')) e = binary(Expr::Node::Kind::Sub, std::move(e), term());
            else return e;
        }
    }

    NodePtr term() {
        auto e = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) e = binary(Expr::Node::Kind::Mul, std::move(e), factor());
            else if (accept('/')) e = binary(Expr::Node::Kind::Div, std::move(e), factor());
            else return e;
        }
    }

    NodePtr factor() {
        skip_ws();
        if (accept('-')) {
            auto n = std::make_unique<Expr::Node>();
            n->kind = Expr::Node::Kind::Neg;
            n->lhs = factor();
            return n;
        }
        if (accept('+')) return factor();
        auto base = primary();
        skip_ws();
        if (accept('^')) return binary(Expr::Node::Kind::Pow, std::move(base), factor());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (accept('(')) {
            auto e = expr();
            expect(')');
            return e;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            return number();
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::string id = ident();
            if (id == "z") return leaf(Expr::Node::Kind::Z);
            if (id == "zbar") return leaf(Expr::Node::Kind::Zbar);
            if (id == "i") return constant(cplx(0, 1));
            if (id == "pi") return constant(cplx(M_PI, 0));
            expect('(');
            auto arg = expr();
            expect(')');
            auto n = std::make_unique<Expr::Node>();
            n->kind = Expr::Node::Kind::Fun;
            n->fun = id;
            n->lhs = std::move(arg);
            n->eval(cplx(0.3, 0.2));  // validates the function name eagerly
            return n;
        }
        throw std::invalid_argument("expr: unexpected input at " + rest());
    }

    NodePtr number() {
        std::size_t end = pos_;
        while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.'))
            ++end;
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < s_.size() && (s_[e] == '+' || s_[e] == '-')) ++e;
            while (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) ++e;
            end = e;
        }
        double v = std::stod(s_.substr(pos_, end - pos_));
        pos_ = end;
        return constant(cplx(v, 0));
    }

    std::string ident() {
        std::size_t end = pos_;
        while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
        std::string id = s_.substr(pos_, end - pos_);
        pos_ = end;
        return id;
    }

    NodePtr leaf(Expr::Node::Kind k) {
        auto n = std::make_unique<Expr::Node>();
        n->kind = k;
        return n;
    }

    NodePtr constant(cplx v) {
        auto n = leaf(Expr::Node::Kind::Num);
        n->value = v;
        return n;
    }

    NodePtr binary(Expr::Node::Kind k, NodePtr a, NodePtr b) {
        auto n = std::make_unique<Expr::Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw std::invalid_argument(std::string("expr: expected '") + c + "' at " + rest());
    }
    std::string rest() const { return "'" + s_.substr(std::min(pos_, s_.size())) + "'"; }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr(const std::string& text) : root_(Parser(text).parse()) {}
Expr::~Expr() = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;

cplx Expr::eval(cplx z) const { return root_->eval(z); }

Field<cplx> Expr::eval(const Domain& dom) const {
    return Field<cplx>::sample(dom, [this](cplx z) { return root_->eval(z); });
}

}  // namespace spinrep
