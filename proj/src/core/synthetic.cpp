#include "core/synthetic.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace permsync {

namespace {

void check_params(const GenParams& p) {
    if (p.k < 2) fail(ErrorKind::InvalidArgument, "k must be at least 2");
    if (p.d < 1) fail(ErrorKind::InvalidArgument, "d must be at least 1");
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) fail(ErrorKind::InvalidArgument, "rho must lie in [0, 1]");
    if (!(p.sigma >= 0.0 && p.sigma <= 1.0)) fail(ErrorKind::InvalidArgument, "sigma must lie in [0, 1]");
}

}  // namespace

SyntheticInstance generate(const GenParams& params) {
    check_params(params);
    Rng rng(params.seed);

    // Each object observes a random subset of the universe in a random
    // order: a full permutation of the d universe features with unobserved
    // rows deleted.
    std::vector<std::vector<int>> universe_of(params.k);
    for (int i = 0; i < params.k; ++i) {
        const std::vector<int> full = rng.permutation(params.d);
        for (int t = 0; t < params.d; ++t) {
            if (rng.uniform01() < params.rho) universe_of[i].push_back(full[t]);
        }
    }

    std::vector<int> sizes(params.k);
    for (int i = 0; i < params.k; ++i) sizes[i] = static_cast<int>(universe_of[i].size());
    const BlockStructure structure = BlockStructure::from_sizes(sizes);

    UniverseAssignment u_gt;
    u_gt.structure = structure;
    u_gt.d = params.d;
    u_gt.column_of = universe_of;

    PairwiseMatchings w_gt = expand_consistent(u_gt);

    // Perturb each block independently: pick a sigma-proportion of its rows
    // and permute their contents among themselves. Row permutations keep the
    // block a partial permutation, and mirrors stay transposes because only
    // the canonical i < j block is stored.
    PairwiseMatchings w(structure);
    for (int i = 0; i < params.k; ++i) {
        for (int j = i + 1; j < params.k; ++j) {
            PartialPermutation block = w_gt.block(i, j);
            const int chosen = static_cast<int>(std::lround(params.sigma * structure.sizes[i]));
            if (chosen >= 2 && !block.entries.empty()) {
                const std::vector<int> rows = rng.sample_without_replacement(structure.sizes[i], chosen);
                std::vector<int> target = rows;
                rng.shuffle(target);
                std::vector<int> destination(structure.sizes[i], -1);
                for (int t = 0; t < chosen; ++t) destination[rows[t]] = target[t];
                for (auto& entry : block.entries) {
                    if (destination[entry.first] >= 0) entry.first = destination[entry.first];
                }
                block.sort_entries();
            }
            if (!block.entries.empty()) w.set_block(i, j, std::move(block));
        }
    }

    return SyntheticInstance{std::move(w), std::move(w_gt), std::move(u_gt)};
}

}  // namespace permsync
