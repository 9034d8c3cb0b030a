#include "daecanon/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "daecanon/errors.hpp"

namespace dae {

namespace {

Expr::NodePtr make_node(Expr::Node n) {
    return std::make_shared<const Expr::Node>(std::move(n));
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Expr::Expr() : node_(make_node({Kind::Literal, 0.0, {}, 0, nullptr, nullptr})) {}

Expr Expr::literal(double v) {
    return Expr(make_node({Kind::Literal, v, {}, 0, nullptr, nullptr}));
}

Expr Expr::time() {
    return Expr(make_node({Kind::Time, 0.0, {}, 0, nullptr, nullptr}));
}

Expr Expr::param(std::string name) {
    return Expr(make_node({Kind::Param, 0.0, std::move(name), 0, nullptr, nullptr}));
}

bool Expr::is_zero() const {
    return node_->kind == Kind::Literal && node_->value == 0.0;
}

Expr operator+(const Expr& x, const Expr& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.is_literal() && y.is_literal()) {
        double v = x.literal_value() + y.literal_value();
        if (finite(v)) return Expr::literal(v);
    }
    return Expr(make_node({Expr::Kind::Add, 0.0, {}, 0, x.node(), y.node()}));
}

Expr operator-(const Expr& x, const Expr& y) {
    if (y.is_zero()) return x;
    if (x.is_literal() && y.is_literal()) {
        double v = x.literal_value() - y.literal_value();
        if (finite(v)) return Expr::literal(v);
    }
    if (x.is_zero()) return -y;
    return Expr(make_node({Expr::Kind::Sub, 0.0, {}, 0, x.node(), y.node()}));
}

Expr operator*(const Expr& x, const Expr& y) {
    if (x.is_zero() || y.is_zero()) return Expr();
    if (x.is_literal() && x.literal_value() == 1.0) return y;
    if (y.is_literal() && y.literal_value() == 1.0) return x;
    if (x.is_literal() && y.is_literal()) {
        double v = x.literal_value() * y.literal_value();
        if (finite(v)) return Expr::literal(v);
    }
    return Expr(make_node({Expr::Kind::Mul, 0.0, {}, 0, x.node(), y.node()}));
}

Expr operator/(const Expr& x, const Expr& y) {
    if (y.is_zero()) throw Error("division by structurally-zero denominator");
    if (x.is_zero()) return Expr();
    if (y.is_literal() && y.literal_value() == 1.0) return x;
    if (x.is_literal() && y.is_literal()) {
        double v = x.literal_value() / y.literal_value();
        if (finite(v)) return Expr::literal(v);
    }
    return Expr(make_node({Expr::Kind::Div, 0.0, {}, 0, x.node(), y.node()}));
}

Expr Expr::operator-() const {
    if (is_literal()) return literal(-literal_value());
    if (node_->kind == Kind::Neg) return Expr(node_->a);
    return Expr(make_node({Kind::Neg, 0.0, {}, 0, node_, nullptr}));
}

Expr Expr::pow(int e) const {
    if (e == 0) return literal(1.0);
    if (e == 1) return *this;
    if (is_literal()) {
        double v = std::pow(literal_value(), e);
        if (finite(v)) return literal(v);
    }
    return Expr(make_node({Kind::Pow, 0.0, {}, e, node_, nullptr}));
}

Expr sin(const Expr& x) {
    if (x.is_literal()) return Expr::literal(std::sin(x.literal_value()));
    return Expr(make_node({Expr::Kind::Sin, 0.0, {}, 0, x.node(), nullptr}));
}

Expr cos(const Expr& x) {
    if (x.is_literal()) return Expr::literal(std::cos(x.literal_value()));
    return Expr(make_node({Expr::Kind::Cos, 0.0, {}, 0, x.node(), nullptr}));
}

Expr exp(const Expr& x) {
    if (x.is_literal()) {
        double v = std::exp(x.literal_value());
        if (finite(v)) return Expr::literal(v);
    }
    return Expr(make_node({Expr::Kind::Exp, 0.0, {}, 0, x.node(), nullptr}));
}

bool Expr::depends_on_time() const {
    switch (node_->kind) {
        case Kind::Literal:
        case Kind::Param:
            return false;
        case Kind::Time:
            return true;
        default: {
            bool dep = node_->a && Expr(node_->a).depends_on_time();
            if (!dep && node_->b) dep = Expr(node_->b).depends_on_time();
            return dep;
        }
    }
}

namespace {

double eval_node(const Expr::Node& n, double t, const Params& params) {
    using K = Expr::Kind;
    switch (n.kind) {
        case K::Literal: return n.value;
        case K::Time: return t;
        case K::Param: {
            auto it = params.find(n.name);
            if (it == params.end()) throw UnboundParameterError(n.name);
            return it->second;
        }
        case K::Neg: return -eval_node(*n.a, t, params);
        case K::Add: return eval_node(*n.a, t, params) + eval_node(*n.b, t, params);
        case K::Sub: return eval_node(*n.a, t, params) - eval_node(*n.b, t, params);
        case K::Mul: return eval_node(*n.a, t, params) * eval_node(*n.b, t, params);
        case K::Div: return eval_node(*n.a, t, params) / eval_node(*n.b, t, params);
        case K::Pow: return std::pow(eval_node(*n.a, t, params), n.exponent);
        case K::Sin: return std::sin(eval_node(*n.a, t, params));
        case K::Cos: return std::cos(eval_node(*n.a, t, params));
        case K::Exp: return std::exp(eval_node(*n.a, t, params));
    }
    throw Error("corrupt expression node");
}

}  // namespace

double Expr::eval(double t, const Params& params) const {
    double v = eval_node(*node_, t, params);
    if (!std::isfinite(v)) throw NonfiniteResultError("expression evaluated to a nonfinite value");
    return v;
}

Expr Expr::derivative() const {
    using K = Kind;
    Expr a = node_->a ? Expr(node_->a) : Expr();
    Expr b = node_->b ? Expr(node_->b) : Expr();
    switch (node_->kind) {
        case K::Literal:
        case K::Param:
            return Expr();
        case K::Time:
            return literal(1.0);
        case K::Neg:
            return -a.derivative();
        case K::Add:
            return a.derivative() + b.derivative();
        case K::Sub:
            return a.derivative() - b.derivative();
        case K::Mul:
            return a.derivative() * b + a * b.derivative();
        case K::Div:
            return (a.derivative() * b - a * b.derivative()) / b.pow(2);
        case K::Pow:
            return literal(node_->exponent) * a.pow(node_->exponent - 1) * a.derivative();
        case K::Sin:
            return cos(a) * a.derivative();
        case K::Cos:
            return -(sin(a) * a.derivative());
        case K::Exp:
            return exp(a) * a.derivative();
    }
    throw Error("corrupt expression node");
}

namespace {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Precedence levels: additive 1, multiplicative 2, unary minus 3, power 4,
// atoms 5. Parenthesize when a node's level is below its context.
void print_node(const Expr::Node& n, int context, std::string& out) {
    using K = Expr::Kind;
    auto wrap = [&](int level, auto&& body) {
        bool parens = level < context;
        if (parens) out += '(';
        body();
        if (parens) out += ')';
    };
    switch (n.kind) {
        case K::Literal:
            if (n.value < 0.0 || (n.value == 0.0 && std::signbit(n.value)))
                wrap(3, [&] { out += format_double(n.value); });
            else
                out += format_double(n.value);
            return;
        case K::Time: out += 't'; return;
        case K::Param: out += n.name; return;
        case K::Neg:
            wrap(3, [&] {
                out += '-';
                print_node(*n.a, 3, out);
            });
            return;
        case K::Add:
            wrap(1, [&] {
                print_node(*n.a, 1, out);
                out += '+';
                print_node(*n.b, 2, out);
            });
            return;
        case K::Sub:
            wrap(1, [&] {
                print_node(*n.a, 1, out);
                out += '-';
                print_node(*n.b, 2, out);
            });
            return;
        case K::Mul:
            wrap(2, [&] {
                print_node(*n.a, 2, out);
                out += '*';
                print_node(*n.b, 3, out);
            });
            return;
        case K::Div:
            wrap(2, [&] {
                print_node(*n.a, 2, out);
                out += '/';
                print_node(*n.b, 3, out);
            });
            return;
        case K::Pow:
            wrap(4, [&] {
                print_node(*n.a, 5, out);
                out += '^';
                out += std::to_string(n.exponent);
            });
            return;
        case K::Sin:
        case K::Cos:
        case K::Exp:
            out += n.kind == K::Sin ? "sin" : (n.kind == K::Cos ? "cos" : "exp");
            out += '(';
            print_node(*n.a, 0, out);
            out += ')';
            return;
    }
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print_node(*node_, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "end of input");
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!consume(c)) throw ParseError(pos_, what);
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (consume('+'))
                e = e + term();
            else if (consume('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (consume('*'))
                e = e * factor();
            else if (consume('/')) {
                std::size_t at = pos_;
                Expr rhs = factor();
                if (rhs.is_zero()) throw ParseError(at, "nonzero denominator");
                e = e / rhs;
            } else
                return e;
        }
    }

    Expr factor() {
        Expr e = base();
        if (consume('^')) return e.pow(integer());
        return e;
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == digits) throw ParseError(pos_, "integer exponent");
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc()) throw ParseError(start, "integer exponent");
        return value;
    }

    Expr base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "operand");
        char c = text_[pos_];
        if (c == '-') {
            // '^' binds tighter than the sign: -t^2 is -(t^2).
            ++pos_;
            return -factor();
        }
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, "number, 't', identifier, function call, or '('");
    }

    Expr number() {
        std::size_t start = pos_;
        bool digits = false;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            digits = digits || std::isdigit(static_cast<unsigned char>(text_[pos_]));
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else
            }
        }
        if (!digits) throw ParseError(start, "number");
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
            throw ParseError(start, "number");
        return Expr::literal(value);
    }

    Expr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "t") return Expr::time();
        if (name == "sin" || name == "cos" || name == "exp") {
            expect('(', "'(' after function name");
            Expr arg = expression();
            expect(')', "')'");
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            return exp(arg);
        }
        return Expr::param(std::move(name));
    }
};

}  // namespace

Expr parse_expr(std::string_view text) {
    if (text.empty()) throw ParseError(0, "nonempty expression");
    return Parser(text).run();
}

// ---------------------------------------------------------------------------
// ExprMatrix

ExprMatrix::ExprMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

ExprMatrix ExprMatrix::identity(int n) {
    ExprMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Expr::literal(1.0);
    return m;
}

ExprMatrix ExprMatrix::from_matrix(const Matrix& src) {
    ExprMatrix m(static_cast<int>(src.rows()), static_cast<int>(src.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (src(i, j) != 0.0) m.at(i, j) = Expr::literal(src(i, j));
    return m;
}

ExprMatrix ExprMatrix::transpose() const {
    ExprMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

ExprMatrix ExprMatrix::operator*(const ExprMatrix& other) const {
    if (cols_ != other.rows_) throw Error("ExprMatrix product: dimension mismatch");
    ExprMatrix m(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < other.cols_; ++j) {
            Expr sum;
            for (int k = 0; k < cols_; ++k) sum = sum + at(i, k) * other.at(k, j);
            m.at(i, j) = sum;
        }
    return m;
}

ExprMatrix ExprMatrix::operator+(const ExprMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error("ExprMatrix sum: dimension mismatch");
    ExprMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j) + other.at(i, j);
    return m;
}

ExprMatrix ExprMatrix::operator-(const ExprMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error("ExprMatrix difference: dimension mismatch");
    ExprMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j) - other.at(i, j);
    return m;
}

ExprMatrix ExprMatrix::scaled(const Expr& s) const {
    ExprMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = s * at(i, j);
    return m;
}

ExprMatrix ExprMatrix::derivative() const {
    ExprMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).derivative();
    return m;
}

bool ExprMatrix::depends_on_time() const {
    for (const auto& e : entries_)
        if (e.depends_on_time()) return true;
    return false;
}

Matrix ExprMatrix::eval(double t, const Params& params) const {
    Matrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            try {
                m(i, j) = at(i, j).eval(t, params);
            } catch (const Error& err) {
                throw Error("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") at t=" + std::to_string(t) + ": " + err.what());
            }
        }
    return m;
}

GridFunction ExprMatrix::sample(double t0, double t1, int n, const Params& params) const {
    GridFunction g;
    g.t0 = t0;
    g.t1 = t1;
    g.continuity_aligned = true;
    g.values.reserve(static_cast<std::size_t>(n));
    double h = (t1 - t0) / (n - 1);
    for (int k = 0; k < n; ++k) g.values.push_back(eval(t0 + k * h, params));
    return g;
}

}  // namespace dae
