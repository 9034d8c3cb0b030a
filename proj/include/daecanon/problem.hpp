#pragma once

#include "daecanon/expr.hpp"

namespace dae {

/// The ordered pair {E, F} of m x m expression matrices over [t0, t1],
/// together with parameter bindings: the DAE E(t)x' + F(t)x = q.
struct CoefficientPair {
    int m = 0;
    ExprMatrix E, F;
    double t0 = 0.0, t1 = 1.0;
    Params params;
};

/// A parsed problem file. Original expression text is kept verbatim per
/// entry so reports can reproduce it bit-exactly.
struct ProblemFile {
    CoefficientPair pair;
    std::vector<std::string> entry_lines;  // "E[i][j] = <original text>"
};

/// Line-oriented format:
///   m = <int>
///   interval = <t0> <t1>
///   param <name> = <real>
///   E[i][j] = <expr>      (1-based, omitted entries are zero)
///   F[i][j] = <expr>
/// with '#' comments. Throws ParseError on malformed input.
ProblemFile parse_problem(std::string_view text);

ProblemFile load_problem(const std::string& path);

/// Serialize a pair to the problem file format (expressions printed via
/// Expr::to_string; zero entries omitted).
std::string write_problem(const CoefficientPair& pair);

}  // namespace dae
