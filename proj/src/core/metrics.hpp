#pragma once

#include <cstdint>

#include "core/matchings.hpp"

namespace permsync {

/// Averaged Frobenius mismatch between composed and direct matchings over all
/// ordered object triples (i, l, j), with the comparison restricted to rows
/// matched in P_il and columns matched in P_lj. Zero exactly when W is
/// cycle consistent. Runs on the sparse representation.
double cycle_error(const PairwiseMatchings& w);

/// Frobenius distance between two matching matrices over the same structure.
double gt_error(const PairwiseMatchings& w, const PairwiseMatchings& gt);

struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    long long num_matchings = 0;
};

/// Precision, recall and F-score of the off-diagonal matchings of w against
/// the ground truth gt, counted once per unordered pair.
PrfResult pr_f(const PairwiseMatchings& w, const PairwiseMatchings& gt);

}  // namespace permsync
