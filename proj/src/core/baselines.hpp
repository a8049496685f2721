#pragma once

#include "core/matchings.hpp"
#include "core/spectral.hpp"

namespace permsync {

struct BaselineResult {
    UniverseAssignment u;
    PairwiseMatchings w_sync;
};

/// Spectral baseline: top-d embedding rounded per object by greedy descending
/// magnitude under row-exact / column-injective constraints. The result is a
/// universe assignment, so its pairwise expansion is always cycle-consistent.
BaselineResult spectral_greedy(const PairwiseMatchings& w, int d, const EigOptions& options = {});

/// Block-projection baseline: rounds each pairwise block of the rank-d
/// reconstruction X_i X_j^T independently, keeping entries of value at least
/// tau under row/column uniqueness. Blocks are never reconciled with each
/// other, so the output is generally not cycle-consistent.
PairwiseMatchings matcheig(const PairwiseMatchings& w, int d, double tau = 0.5,
                           const EigOptions& options = {});

}  // namespace permsync
