#include "daecanon/problem.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "daecanon/errors.hpp"

namespace dae {

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view token, std::size_t offset) {
    token = strip(token);
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw ParseError(offset, "real number");
    return v;
}

// Parses "X[i][j]" with 1-based indices; returns which matrix and 0-based (i, j).
struct EntryRef {
    char which;
    int i, j;
};

EntryRef parse_entry_ref(std::string_view head, std::size_t offset, int m) {
    EntryRef ref{};
    if (head.size() < 7 || (head[0] != 'E' && head[0] != 'F'))
        throw ParseError(offset, "'E[i][j]' or 'F[i][j]'");
    ref.which = head[0];
    std::size_t p = 1;
    auto read_index = [&](int& out) {
        if (p >= head.size() || head[p] != '[') throw ParseError(offset + p, "'['");
        ++p;
        std::size_t start = p;
        while (p < head.size() && std::isdigit(static_cast<unsigned char>(head[p]))) ++p;
        if (p == start) throw ParseError(offset + p, "index");
        int v = 0;
        std::from_chars(head.data() + start, head.data() + p, v);
        if (p >= head.size() || head[p] != ']') throw ParseError(offset + p, "']'");
        ++p;
        out = v;
    };
    read_index(ref.i);
    read_index(ref.j);
    if (p != head.size()) throw ParseError(offset + p, "'=' after entry reference");
    if (ref.i < 1 || ref.i > m || ref.j < 1 || ref.j > m)
        throw ParseError(offset, "index in 1.." + std::to_string(m));
    --ref.i;
    --ref.j;
    return ref;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
    ProblemFile out;
    CoefficientPair& pair = out.pair;
    bool have_m = false, have_interval = false;

    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        std::string_view raw = text.substr(line_start, line_end - line_start);
        std::size_t offset = line_start;
        line_start = line_end + 1;

        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(offset, "'=' in directive");
        std::string_view head = strip(line.substr(0, eq));
        std::string_view value = strip(line.substr(eq + 1));

        if (head == "m") {
            int m = 0;
            auto res = std::from_chars(value.data(), value.data() + value.size(), m);
            if (res.ec != std::errc() || m <= 0) throw ParseError(offset, "positive integer m");
            pair.m = m;
            pair.E = ExprMatrix(m, m);
            pair.F = ExprMatrix(m, m);
            have_m = true;
        } else if (head == "interval") {
            std::istringstream iss{std::string(value)};
            if (!(iss >> pair.t0 >> pair.t1) || !(pair.t1 > pair.t0))
                throw ParseError(offset, "interval '<t0> <t1>' with t0 < t1");
            have_interval = true;
        } else if (head.substr(0, 6) == "param ") {
            std::string name(strip(head.substr(6)));
            if (name.empty() || name == "t") throw ParseError(offset, "parameter name");
            pair.params[name] = parse_real(value, offset);
        } else if (!head.empty() && (head[0] == 'E' || head[0] == 'F')) {
            if (!have_m) throw ParseError(offset, "'m = <int>' before matrix entries");
            EntryRef ref = parse_entry_ref(head, offset, pair.m);
            Expr e;
            try {
                e = parse_expr(value);
            } catch (const ParseError& pe) {
                throw ParseError(offset + eq + 1 + pe.offset, pe.expected);
            }
            (ref.which == 'E' ? pair.E : pair.F).at(ref.i, ref.j) = e;
            out.entry_lines.emplace_back(std::string(head) + " = " + std::string(value));
        } else {
            throw ParseError(offset, "'m', 'interval', 'param', or matrix entry");
        }
    }
    if (!have_m) throw ParseError(0, "'m = <int>' directive");
    if (!have_interval) throw ParseError(0, "'interval = <t0> <t1>' directive");
    return out;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

namespace {
std::string format_real(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
}  // namespace

std::string write_problem(const CoefficientPair& pair) {
    std::string out;
    out += "m = " + std::to_string(pair.m) + "\n";
    out += "interval = " + format_real(pair.t0) + " " + format_real(pair.t1) + "\n";
    for (const auto& [name, value] : pair.params)
        out += "param " + name + " = " + format_real(value) + "\n";
    auto emit = [&](char which, const ExprMatrix& mat) {
        for (int i = 0; i < mat.rows(); ++i)
            for (int j = 0; j < mat.cols(); ++j)
                if (!mat.at(i, j).is_zero())
                    out += std::string(1, which) + "[" + std::to_string(i + 1) + "][" +
                           std::to_string(j + 1) + "] = " + mat.at(i, j).to_string() + "\n";
    };
    emit('E', pair.E);
    emit('F', pair.F);
    return out;
}

}  // namespace dae
