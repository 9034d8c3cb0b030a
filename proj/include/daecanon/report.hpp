#pragma once

#include <optional>

#include "daecanon/canonical.hpp"
#include "daecanon/characteristics.hpp"
#include "daecanon/tractability.hpp"

namespace dae {

inline constexpr const char* kToolVersion = "daecanon 1.0.0";
inline constexpr const char* kMachineSchema = "daecanon-report v1";

struct AnalysisOptions {
    int grid_n = 129;
    double rank_tol = kRankTol;
    std::uint64_t seed = 0;           // echoed for provenance
    std::vector<double> at_times;     // subspace snapshots
    bool with_canonical = true;       // run tractability + adjoint machinery
};

struct SubspaceSnapshot {
    double t = 0.0;
    Matrix S_can_basis;   // orthonormal
    Matrix N_can_basis;   // orthonormal
    Matrix Pi_can;
    Matrix G;             // accurate-IC matrix at t
};

/// Everything a full analysis produces, in one machine-writable record.
/// The machine form contains every number of the human form.
struct AnalysisReport {
    AnalysisOptions options;
    int m = 0;
    double t0 = 0.0, t1 = 0.0;
    Params params;

    VerdictKind verdict = VerdictKind::NotPreRegular;
    int failed_level = -1;
    std::string failure_message;

    std::vector<int> level_m, level_r, level_theta;
    std::vector<double> level_min_sigma_EF;  // min over nodes per level
    double terminal_min_sigma = 0.0;
    double anchor = 0.0;

    std::optional<Characteristics> characteristics;
    std::optional<std::vector<int>> tractability_ranks;  // from the projector sequence
    int mu_T = -1;
    double max_condition_M = 0.0;
    std::vector<SubspaceSnapshot> snapshots;
};

AnalysisReport analyze(const CoefficientPair& pair, const AnalysisOptions& options);

std::string to_machine_text(const AnalysisReport& report);
std::string to_human_text(const AnalysisReport& report);

/// Constant-pair pipeline: quasi-Weierstrass data + block counts.
struct PencilReport {
    AnalysisOptions options;
    int m = 0;
    bool regular = false;
    int d = -1, mu = -1;
    std::vector<int> jordan_theta;
    Matrix Pi_can;
    Matrix W_block, N_block;
    double cond_T = 0.0;
};

PencilReport analyze_pencil(const CoefficientPair& pair, const AnalysisOptions& options);
std::string to_machine_text(const PencilReport& report);
std::string to_human_text(const PencilReport& report);

}  // namespace dae
