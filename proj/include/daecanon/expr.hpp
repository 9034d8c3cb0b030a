#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "daecanon/grid.hpp"

namespace dae {

using Params = std::map<std::string, double>;

/// Immutable closed-form expression in the time symbol `t` and named
/// parameters: literals, +, -, *, /, integer powers, sin, cos, exp.
/// Smart constructors fold literal subtrees, so structurally-constant
/// arithmetic collapses at build time.
class Expr {
  public:
    enum class Kind { Literal, Time, Param, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Node {
        Kind kind;
        double value = 0.0;   // Literal
        std::string name;     // Param
        int exponent = 0;     // Pow
        NodePtr a, b;
    };

    /// Zero literal.
    Expr();
    static Expr literal(double v);
    static Expr time();
    static Expr param(std::string name);

    friend Expr operator+(const Expr& x, const Expr& y);
    friend Expr operator-(const Expr& x, const Expr& y);
    friend Expr operator*(const Expr& x, const Expr& y);
    friend Expr operator/(const Expr& x, const Expr& y);
    Expr operator-() const;
    Expr pow(int e) const;

    Kind kind() const { return node_->kind; }
    bool is_zero() const;
    bool is_literal() const { return node_->kind == Kind::Literal; }
    double literal_value() const { return node_->value; }
    bool depends_on_time() const;

    /// IEEE double evaluation with deterministic operand order.
    double eval(double t, const Params& params = {}) const;

    /// Exact symbolic d/dt.
    Expr derivative() const;

    std::string to_string() const;

    const NodePtr& node() const { return node_; }
    explicit Expr(NodePtr n) : node_(std::move(n)) {}

  private:
    NodePtr node_;
};

Expr sin(const Expr& x);
Expr cos(const Expr& x);
Expr exp(const Expr& x);

/// Recursive-descent parser for
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 't' | ident | func '(' expr ')' | '(' expr ')' | '-' base
/// with funcs sin, cos, exp. Throws ParseError carrying the byte offset.
Expr parse_expr(std::string_view text);

/// Dense matrix of expressions; default-constructed entries are zero.
class ExprMatrix {
  public:
    ExprMatrix() : rows_(0), cols_(0) {}
    ExprMatrix(int rows, int cols);
    static ExprMatrix identity(int n);
    static ExprMatrix from_matrix(const Matrix& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Expr& at(int i, int j) { return entries_[index(i, j)]; }
    const Expr& at(int i, int j) const { return entries_[index(i, j)]; }

    ExprMatrix transpose() const;
    ExprMatrix operator*(const ExprMatrix& other) const;
    ExprMatrix operator+(const ExprMatrix& other) const;
    ExprMatrix operator-(const ExprMatrix& other) const;
    ExprMatrix scaled(const Expr& s) const;
    ExprMatrix derivative() const;

    bool depends_on_time() const;

    Matrix eval(double t, const Params& params = {}) const;

    /// Entrywise evaluation on the uniform grid; eval failures are rethrown
    /// with the offending (row, col, t) location.
    GridFunction sample(double t0, double t1, int n, const Params& params = {}) const;

  private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }
    int rows_, cols_;
    std::vector<Expr> entries_;
};

}  // namespace dae
