// Command-line front end: analyze problem files, print reports and
// subspaces, solve homogeneous IVPs, run the fixture self-test.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "daecanon/fixtures.hpp"
#include "daecanon/ivp.hpp"
#include "daecanon/pencil.hpp"
#include "daecanon/report.hpp"
#include "daecanon/rng.hpp"

namespace {

using namespace dae;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotRegular = 2;
constexpr int kExitNumerical = 3;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write to '" + out_path + "'");
    out << text;
}

int verdict_exit(VerdictKind v) {
    switch (v) {
        case VerdictKind::Regular: return kExitOk;
        case VerdictKind::NotPreRegular: return kExitNotRegular;
        case VerdictKind::RankDrift: return kExitNumerical;
    }
    return kExitNumerical;
}

std::string print_matrix_human(const std::string& name, const Matrix& m) {
    std::string out = name + " (" + std::to_string(m.rows()) + " x " +
                      std::to_string(m.cols()) + "):\n";
    char buf[48];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "% .10g ", m(i, j));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

Vector parse_vector(const std::string& text, int m) {
    Vector v(m);
    std::stringstream ss(text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= m) throw Error("--ic has more than m components");
        v(i++) = std::stod(item);
    }
    if (i != m) throw Error("--ic needs exactly m comma-separated components");
    return v;
}

int run_selftest(std::uint64_t seed) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    {
        Fixture cm = campbell_moore(1.0);
        ReductionChain chain = reduce_full(cm.pair, 129);
        check(chain.regular() && chain.mu == 3 && chain.d == 4 &&
                  chain.theta_list() == cm.theta && chain.r_list() == cm.r_list,
              "campbell-moore characteristics (mu=3, d=4, r=6,5,4, theta=1,1,0)");
        if (chain.regular()) {
            Characteristics ch = derive_characteristics(chain);
            check(ch.tractability == cm.tractability, "campbell-moore tractability 6 6 6 7");
        }
        AdmissibleSequence seq = admissible_sequence(cm.pair, 129);
        check(seq.regular && seq.mu_T == 3, "campbell-moore projector sequence mu_T=3");
    }
    {
        Fixture gm = gm86_example();
        ReductionChain chain = reduce_full(gm.pair, 513);
        double en = 0, fn = 0;
        if (chain.levels.size() > 1) {
            for (const auto& v : chain.levels[1].E.values) en = std::max(en, v.norm());
            for (const auto& v : chain.levels[1].F.values) fn = std::max(fn, v.norm());
        }
        check(chain.verdict == VerdictKind::NotPreRegular && chain.failed_level == 1 &&
                  en < 1e-8 && fn < 1e-8,
              "gm86 example fails pre-regularity at level 1 with E1, F1 ~ 0");
    }
    {
        SplitMix64 rng(seed ? seed : 20240917ull);
        bool ok = true;
        for (int it = 0; it < 20 && ok; ++it) {
            int m = rng.uniform_int(2, 7);
            int mu = rng.uniform_int(1, 3);
            std::vector<int> profile;
            int limit = m;
            for (int i = mu - 2; i >= 0; --i) limit = limit;  // keep profile small
            profile.assign(static_cast<std::size_t>(mu), 0);
            for (int i = mu - 2; i >= 0; --i)
                profile[static_cast<std::size_t>(i)] =
                    std::max(profile[static_cast<std::size_t>(i) + 1], 1);
            int need = 0;
            for (int k = 2; k <= mu; ++k) need += k;
            if (need + (mu == 1 ? 1 : 0) > m) {
                --it;
                continue;
            }
            Fixture fx = plant_regular(m, profile, rng.next());
            ReductionChain chain = reduce_full(fx.pair, 65);
            ok = chain.regular() && chain.mu == fx.mu && chain.d == fx.d &&
                 chain.theta_list() == fx.theta;
            Matrix e = fx.pair.E.eval(0, fx.pair.params);
            Matrix f = fx.pair.F.eval(0, fx.pair.params);
            PencilForm form = quasi_weierstrass(e, f);
            ok = ok && form.d == fx.d && form.mu == fx.mu &&
                 (form.Pi_can - *fx.Pi_can_planted).norm() < 1e-8;
        }
        check(ok, "seeded plant-and-recover (20 cases, reduction + pencil)");
    }
    {
        Fixture semi = semiexplicit_example(4, 2, 2);
        ReductionChain chain = reduce_full(semi.pair, 129);
        ReductionChain adj = reduce_full(adjoint_pair(semi.pair), 129);
        CanonicalFrame frame = canonical_frame(semi.pair, chain, adj);
        Vector xa(4);
        xa << 1, -1, 0.5, 0.25;
        Trajectory tr = solve_homogeneous(semi.pair, chain, frame, 0.0, xa);
        double worst = 0;
        for (double r : tr.residual) worst = std::max(worst, r);
        check(worst < 1e-6, "semi-explicit homogeneous solve residual < 1e-6");
    }
    std::cout << (failures == 0 ? "self-test passed" : "self-test FAILED") << "\n";
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"daecanon: regularity, canonical subspaces, and accurate initial "
                 "conditions for linear time-varying DAEs E(t)x' + F(t)x = q"};
    app.require_subcommand(1);

    std::string file, out_path, format = "text", ic_text;
    int grid_n = 129;
    double rank_tol = kRankTol;
    std::uint64_t seed = 0;
    std::vector<double> at_times;
    double from_t = 0.0, to_t = 1.0;
    bool have_from = false, have_to = false;

    auto add_common = [&](CLI::App* cmd, bool needs_file) {
        if (needs_file) cmd->add_option("file", file, "problem file")->required();
        cmd->add_option("--grid-n", grid_n, "grid nodes (default 129)");
        cmd->add_option("--rank-tol", rank_tol, "relative rank tolerance (default 1e-9)");
        cmd->add_option("--seed", seed, "seed echoed into reports");
        cmd->add_option("--format", format, "text | machine");
        cmd->add_option("--out", out_path, "write output to a file instead of stdout");
    };

    CLI::App* c_analyze = app.add_subcommand("analyze", "full regularity analysis");
    add_common(c_analyze, true);
    c_analyze->add_option("--at", at_times, "subspace snapshot times");

    CLI::App* c_pencil = app.add_subcommand("pencil", "constant-pair pencil analysis");
    add_common(c_pencil, true);

    CLI::App* c_sub = app.add_subcommand("subspaces", "print S_can, N_can, Pi_can at --at");
    add_common(c_sub, true);
    c_sub->add_option("--at", at_times, "evaluation times")->required();

    CLI::App* c_ic = app.add_subcommand("ic-matrix", "print the accurate-IC matrix G_a");
    add_common(c_ic, true);
    c_ic->add_option("--at", at_times, "evaluation times")->required();

    CLI::App* c_solve = app.add_subcommand("solve", "solve the homogeneous IVP, CSV output");
    add_common(c_solve, true);
    c_solve->add_option("--ic", ic_text, "initial data x_a as comma-separated reals")
        ->required();
    c_solve->add_option("--from", from_t, "initial time a")->required();
    c_solve->add_option("--to", to_t, "final time");

    CLI::App* c_self = app.add_subcommand("selftest", "run the fixture self-test");
    c_self->add_option("--seed", seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    have_from = c_solve->count("--from") > 0;
    have_to = c_solve->count("--to") > 0;

    try {
        if (c_self->parsed()) return run_selftest(seed);

        ProblemFile pf = load_problem(file);
        AnalysisOptions opts;
        opts.grid_n = grid_n;
        opts.rank_tol = rank_tol;
        opts.seed = seed;
        opts.at_times = at_times;

        if (c_analyze->parsed()) {
            AnalysisReport rep = analyze(pf.pair, opts);
            write_output(format == "machine" ? to_machine_text(rep) : to_human_text(rep),
                         out_path);
            return verdict_exit(rep.verdict);
        }
        if (c_pencil->parsed()) {
            PencilReport rep = analyze_pencil(pf.pair, opts);
            write_output(format == "machine" ? to_machine_text(rep) : to_human_text(rep),
                         out_path);
            return rep.regular ? kExitOk : kExitNotRegular;
        }
        if (c_sub->parsed() || c_ic->parsed()) {
            AnalysisReport rep = analyze(pf.pair, opts);
            if (rep.verdict != VerdictKind::Regular) {
                write_output(to_human_text(rep), out_path);
                return verdict_exit(rep.verdict);
            }
            if (format == "machine") {
                write_output(to_machine_text(rep), out_path);
            } else {
                std::string out;
                for (const auto& snap : rep.snapshots) {
                    out += "t = " + std::to_string(snap.t) + "\n";
                    if (c_sub->parsed()) {
                        out += print_matrix_human("S_can basis", snap.S_can_basis);
                        out += print_matrix_human("N_can basis", snap.N_can_basis);
                        out += print_matrix_human("Pi_can", snap.Pi_can);
                    } else {
                        out += print_matrix_human("G_a", snap.G);
                    }
                }
                write_output(out, out_path);
            }
            return kExitOk;
        }
        if (c_solve->parsed()) {
            CoefficientPair pair = pf.pair;
            if (have_from) pair.t0 = from_t;
            pair.t1 = have_to ? to_t : pf.pair.t1;
            if (!(pair.t1 > pair.t0)) throw Error("--to must exceed --from");
            Vector xa = parse_vector(ic_text, pair.m);
            ReductionChain chain = reduce_full(pair, grid_n, rank_tol);
            if (!chain.regular()) {
                std::cerr << "not regular: " << to_string(chain.verdict) << "\n";
                return verdict_exit(chain.verdict);
            }
            ReductionChain adj = reduce_full(adjoint_pair(pair), grid_n, rank_tol);
            CanonicalFrame frame = canonical_frame(pair, chain, adj, rank_tol);
            Trajectory tr = solve_homogeneous(pair, chain, frame, pair.t0, xa);
            write_output(tr.to_csv(), out_path);
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotRegularError& e) {
        std::cerr << "not regular: " << e.what() << "\n";
        return kExitNotRegular;
    } catch (const RankDriftError& e) {
        std::cerr << "rank drift: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
