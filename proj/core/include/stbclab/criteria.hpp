#ifndef STBCLAB_CRITERIA_HPP
#define STBCLAB_CRITERIA_HPP

#include <optional>
#include <string>

#include "stbclab/types.hpp"
#include "stbclab/codes.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/grouping.hpp"

// Numerical verification of the two full-diversity conditions for group
// decoding: the codeword full-rank property over the constellation's
// difference set, and linear independence of the grouped equivalent-channel
// columns for every nonzero channel. Sampling refutes soundly but verifies
// only probabilistically; a PASS means "no violation found in the trials
// run", not a proof.

namespace stbclab::criteria {

struct Witness {
    CVector delta_x; // violating symbol difference (full-rank check)
    CVector h;       // violating channel (independence / cross-check)
    int group = -1;  // group whose column degenerated, when applicable
    int column = -1; // symbol index of that column
};

struct CriterionReport {
    bool passed = true;
    std::optional<Witness> witness;
    double min_margin = 0.0; // smallest normalized residual observed
    long trials_used = 0;
    bool exhaustive = false;
    // full-rank check: the two Theorem-style verdicts, which must agree
    bool codeword_verdict = true;
    bool gdomain_verdict = true;
    std::string detail;
};

// Structured-plus-random channel plan. The structured set (standard basis
// vectors and all 2-sparse patterns with entries in {1,-1,i,-i}) targets the
// measure-zero degeneracies random Gaussian draws never hit.
struct TrialPlan {
    long random_trials = 10000;
    bool structured = true;
    int n_r = 1;
    uint64_t seed = 1;
    double rho_threshold = 1e-6;
};

// Every difference codeword encode(dx), dx in dA^n \ {0}, must have rank n_t.
// Exhaustive when |dA|^n <= budget, otherwise uniform sampling of budget
// draws. The verdict is cross-validated in the G-domain: G(h) dx must be
// nonzero for all tested dx over the structured-plus-random h set.
CriterionReport check_full_rank(const LinearDispersionCode& code,
                                const Constellation& A, long budget,
                                uint64_t seed = 1, int n_r = 1);

// For every h in the plan, no column of a group's block may lie in the span
// of the other groups' columns: rho = ||P_k g|| / ||g|| must exceed the
// threshold.
CriterionReport check_group_independence(const LinearDispersionCode& code,
                                         const GroupingScheme& scheme,
                                         const TrialPlan& plan);

// Min over unit-sphere channel samples of det(G(h)^H G(h)). Requires
// n <= m for the given n_r.
double estimate_shang_xia_constant(const LinearDispersionCode& code, int n_r,
                                   long samples, uint64_t seed = 1);

} // namespace stbclab::criteria

#endif
