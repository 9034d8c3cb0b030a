#include "daecanon/report.hpp"

#include <cstdio>

#include "daecanon/pencil.hpp"

namespace dae {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_ints(std::string& out, const char* key, const std::vector<int>& v) {
    out += key;
    out += " =";
    for (int x : v) out += " " + std::to_string(x);
    out += "\n";
}

void emit_matrix(std::string& out, const std::string& name, const Matrix& m) {
    out += "matrix " + name + " " + std::to_string(m.rows()) + " " +
           std::to_string(m.cols()) + "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += " ";
            out += g17(m(i, j));
        }
        out += "\n";
    }
    out += "end\n";
}

void emit_provenance(std::string& out, const AnalysisOptions& o) {
    out += std::string("tool = ") + kToolVersion + "\n";
    out += "grid_n = " + std::to_string(o.grid_n) + "\n";
    out += "rank_tol = " + g17(o.rank_tol) + "\n";
    out += "seed = " + std::to_string(o.seed) + "\n";
}

}  // namespace

AnalysisReport analyze(const CoefficientPair& pair, const AnalysisOptions& options) {
    AnalysisReport rep;
    rep.options = options;
    rep.m = pair.m;
    rep.t0 = pair.t0;
    rep.t1 = pair.t1;
    rep.params = pair.params;

    ReductionChain chain = reduce_full(pair, options.grid_n, options.rank_tol);
    rep.verdict = chain.verdict;
    rep.failed_level = chain.failed_level;
    rep.anchor = chain.anchor;
    for (const auto& lvl : chain.levels) {
        rep.level_m.push_back(lvl.m_j);
        rep.level_r.push_back(lvl.r);
        rep.level_theta.push_back(lvl.theta);
        double smin = std::numeric_limits<double>::infinity();
        for (double s : lvl.prereg.min_sigma_EF) smin = std::min(smin, s);
        rep.level_min_sigma_EF.push_back(smin);
    }
    if (!chain.regular()) {
        rep.failure_message = chain.levels.back().prereg.message;
        return rep;
    }
    if (!chain.zero_flow && chain.mu > 0)
        rep.terminal_min_sigma = chain.terminal().min_sigma_E;
    rep.characteristics = derive_characteristics(chain);

    if (!options.with_canonical) return rep;

    AdmissibleSequence seq =
        admissible_sequence(pair, options.grid_n, options.rank_tol);
    rep.tractability_ranks = seq.r_T_list();
    rep.mu_T = seq.mu_T;

    if (chain.d > 0) {
        ReductionChain adj =
            reduce_full(adjoint_pair(pair), options.grid_n, options.rank_tol);
        CanonicalFrame frame = canonical_frame(pair, chain, adj, options.rank_tol);
        for (double c : frame.condition_M)
            rep.max_condition_M = std::max(rep.max_condition_M, c);
        for (double t : options.at_times) {
            SubspaceSnapshot snap;
            snap.t = t;
            snap.S_can_basis = orthonormalize(frame.C_Scan.eval(t)).columns;
            snap.N_can_basis = orthonormalize(frame.C_Ncan.eval(t)).columns;
            snap.Pi_can = frame.Pi_can.eval(t);
            snap.G = frame.G.eval(t);
            rep.snapshots.push_back(std::move(snap));
        }
    }
    return rep;
}

std::string to_machine_text(const AnalysisReport& rep) {
    std::string out;
    out += std::string(kMachineSchema) + "\n";
    out += "kind = analyze\n";
    emit_provenance(out, rep.options);
    out += "m = " + std::to_string(rep.m) + "\n";
    out += "interval = " + g17(rep.t0) + " " + g17(rep.t1) + "\n";
    for (const auto& [k, v] : rep.params) out += "param " + k + " = " + g17(v) + "\n";
    out += "verdict = " + to_string(rep.verdict) + "\n";
    out += "anchor = " + g17(rep.anchor) + "\n";
    if (rep.verdict != VerdictKind::Regular) {
        out += "failed_level = " + std::to_string(rep.failed_level) + "\n";
        out += "failure = " + rep.failure_message + "\n";
    }
    emit_ints(out, "level_m", rep.level_m);
    emit_ints(out, "level_r", rep.level_r);
    emit_ints(out, "level_theta", rep.level_theta);
    out += "level_min_sigma_EF =";
    for (double s : rep.level_min_sigma_EF) out += " " + g17(s);
    out += "\n";
    if (rep.characteristics) {
        const Characteristics& ch = *rep.characteristics;
        out += "mu = " + std::to_string(ch.mu) + "\n";
        out += "d = " + std::to_string(ch.d) + "\n";
        emit_ints(out, "r", ch.r_list);
        emit_ints(out, "theta", ch.theta_list);
        out += "mu_S = " + std::to_string(ch.mu_S) + "\n";
        for (const auto& row : ch.strangeness)
            emit_ints(out, "strangeness_row",
                      {row.r, row.a, row.s, row.d, row.u});
        emit_ints(out, "tractability", ch.tractability);
        emit_ints(out, "dissection", ch.dissection);
        out += "terminal_min_sigma = " + g17(rep.terminal_min_sigma) + "\n";
    }
    if (rep.tractability_ranks) {
        emit_ints(out, "tractability_sequence_ranks", *rep.tractability_ranks);
        out += "mu_T = " + std::to_string(rep.mu_T) + "\n";
    }
    if (rep.max_condition_M > 0)
        out += "max_condition_M = " + g17(rep.max_condition_M) + "\n";
    for (const auto& snap : rep.snapshots) {
        out += "at = " + g17(snap.t) + "\n";
        emit_matrix(out, "S_can_basis", snap.S_can_basis);
        emit_matrix(out, "N_can_basis", snap.N_can_basis);
        emit_matrix(out, "Pi_can", snap.Pi_can);
        emit_matrix(out, "G", snap.G);
    }
    return out;
}

std::string to_human_text(const AnalysisReport& rep) {
    std::string out;
    out += std::string(kToolVersion) + " analysis\n";
    out += "  m = " + std::to_string(rep.m) + " on [" + g17(rep.t0) + ", " + g17(rep.t1) +
           "], grid " + std::to_string(rep.options.grid_n) + ", rank tol " +
           g17(rep.options.rank_tol) + "\n";
    out += "  verdict: " + to_string(rep.verdict) + "\n";
    if (rep.verdict != VerdictKind::Regular) {
        out += "  failed at level " + std::to_string(rep.failed_level) + ": " +
               rep.failure_message + "\n";
        for (std::size_t j = 0; j < rep.level_m.size(); ++j)
            out += "    level " + std::to_string(j) + ": m=" +
                   std::to_string(rep.level_m[j]) + " r=" + std::to_string(rep.level_r[j]) +
                   " theta=" + std::to_string(rep.level_theta[j]) + " min_sigma_[EF]=" +
                   g17(rep.level_min_sigma_EF[j]) + "\n";
        return out;
    }
    const Characteristics& ch = *rep.characteristics;
    out += "  index mu = " + std::to_string(ch.mu) + ", dynamical degree d = " +
           std::to_string(ch.d) + "\n";
    out += "  r       =";
    for (int v : ch.r_list) out += " " + std::to_string(v);
    out += "\n  theta   =";
    for (int v : ch.theta_list) out += " " + std::to_string(v);
    out += "\n  strangeness (mu_S = " + std::to_string(ch.mu_S) + "): rows (r, a, s, d, u)\n";
    for (const auto& row : ch.strangeness)
        out += "    " + std::to_string(row.r) + " " + std::to_string(row.a) + " " +
               std::to_string(row.s) + " " + std::to_string(row.d) + " " +
               std::to_string(row.u) + "\n";
    out += "  tractability r^T =";
    for (int v : ch.tractability) out += " " + std::to_string(v);
    out += "\n  dissection   r^D =";
    for (int v : ch.dissection) out += " " + std::to_string(v);
    out += "\n";
    if (rep.tractability_ranks) {
        out += "  projector sequence ranks =";
        for (int v : *rep.tractability_ranks) out += " " + std::to_string(v);
        out += " (mu_T = " + std::to_string(rep.mu_T) + ")\n";
    }
    out += "  terminal min sigma(E_mu) = " + g17(rep.terminal_min_sigma) + "\n";
    if (rep.max_condition_M > 0)
        out += "  max condition of [C_Scan C_Ncan] = " + g17(rep.max_condition_M) + "\n";
    for (const auto& snap : rep.snapshots) {
        out += "  snapshot at t = " + g17(snap.t) + ": dim S_can = " +
               std::to_string(snap.S_can_basis.cols()) + ", dim N_can = " +
               std::to_string(snap.N_can_basis.cols()) + "\n";
    }
    return out;
}

PencilReport analyze_pencil(const CoefficientPair& pair, const AnalysisOptions& options) {
    if (pair.E.depends_on_time() || pair.F.depends_on_time())
        throw Error("pencil analysis requires constant coefficient matrices");
    PencilReport rep;
    rep.options = options;
    rep.m = pair.m;
    Matrix e = pair.E.eval(pair.t0, pair.params);
    Matrix f = pair.F.eval(pair.t0, pair.params);
    rep.regular = is_regular_pencil(e, f, options.rank_tol);
    if (!rep.regular) return rep;
    PencilForm form = quasi_weierstrass(e, f, options.rank_tol);
    rep.d = form.d;
    rep.mu = form.mu;
    rep.jordan_theta = jordan_block_counts(form, options.rank_tol);
    rep.Pi_can = form.Pi_can;
    rep.W_block = form.W_block;
    rep.N_block = form.N_block;
    rep.cond_T = form.cond_T;
    return rep;
}

std::string to_machine_text(const PencilReport& rep) {
    std::string out;
    out += std::string(kMachineSchema) + "\n";
    out += "kind = pencil\n";
    emit_provenance(out, rep.options);
    out += "m = " + std::to_string(rep.m) + "\n";
    out += std::string("regular = ") + (rep.regular ? "true" : "false") + "\n";
    if (!rep.regular) return out;
    out += "d = " + std::to_string(rep.d) + "\n";
    out += "mu = " + std::to_string(rep.mu) + "\n";
    emit_ints(out, "jordan_theta", rep.jordan_theta);
    out += "cond_T = " + g17(rep.cond_T) + "\n";
    emit_matrix(out, "Pi_can", rep.Pi_can);
    emit_matrix(out, "W_block", rep.W_block);
    emit_matrix(out, "N_block", rep.N_block);
    return out;
}

std::string to_human_text(const PencilReport& rep) {
    std::string out;
    out += std::string(kToolVersion) + " pencil analysis\n";
    out += "  m = " + std::to_string(rep.m) + "\n";
    out += std::string("  regular: ") + (rep.regular ? "yes" : "no") + "\n";
    if (!rep.regular) return out;
    out += "  d = " + std::to_string(rep.d) + ", Kronecker index mu = " +
           std::to_string(rep.mu) + "\n";
    out += "  Jordan blocks of order >= i+2 (i = 0..mu-2):";
    for (int v : rep.jordan_theta) out += " " + std::to_string(v);
    out += "\n  condition of [E V* | F W*] = " + g17(rep.cond_T) + "\n";
    return out;
}

}  // namespace dae
