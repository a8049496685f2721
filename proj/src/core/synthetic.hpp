#pragma once

#include <cstdint>

#include "core/matchings.hpp"

namespace permsync {

struct GenParams {
    int k = 2;            // number of objects
    int d = 1;            // universe size
    double rho = 1.0;     // observation rate: each universe feature is kept per object with probability rho
    double sigma = 0.0;   // noise rate: proportion of rows shuffled per off-diagonal block
    std::uint64_t seed = 0;
};

struct SyntheticInstance {
    PairwiseMatchings w;      // observed (possibly perturbed) matchings
    PairwiseMatchings w_gt;   // noise-free ground truth
    UniverseAssignment u_gt;  // ground-truth universe assignment behind w_gt
};

/// Samples one full permutation per object, drops unobserved rows, expands
/// the consistent ground truth, and perturbs each block (i, j), i < j, by
/// shuffling a sigma-proportion of its rows among themselves; the mirror
/// block stays the exact transpose. Identical parameters and seed reproduce
/// the instance bit for bit.
SyntheticInstance generate(const GenParams& params);

}  // namespace permsync
