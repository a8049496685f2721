#include "core/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace permsync {

namespace {

struct Candidate {
    double value;
    int row;
    int col;
};

void sort_descending(std::vector<Candidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
}

Eigen::MatrixXd padded_embedding(const PairwiseMatchings& w, int d, const EigOptions& options) {
    const int d_eff = std::min(d, w.m());
    const SpectralFactor factor = eig_topd(w, d_eff, options);
    Eigen::MatrixXd x(w.m(), d);
    x.leftCols(d_eff) = factor.x;
    x.rightCols(d - d_eff).setZero();
    return x;
}

}  // namespace

BaselineResult spectral_greedy(const PairwiseMatchings& w, int d, const EigOptions& options) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "universe size estimate must be at least 1");
    const ValidationResult validity = validate_pairwise(w);
    if (!validity.ok) fail(ErrorKind::Validation, validity.message);
    const BlockStructure& structure = w.structure();
    const int largest = *std::max_element(structure.sizes.begin(), structure.sizes.end());
    if (d < largest) {
        fail(ErrorKind::Validation, "universe size estimate " + std::to_string(d) +
                                        " is smaller than the largest object (" +
                                        std::to_string(largest) + " features)");
    }

    BaselineResult result;
    result.u.structure = structure;
    result.u.d = d;
    result.u.column_of.assign(structure.k, {});
    if (structure.m == 0) {
        result.w_sync = expand_consistent(result.u);
        return result;
    }

    const Eigen::MatrixXd x = padded_embedding(w, d, options);
    for (int i = 0; i < structure.k; ++i) {
        const int mi = structure.sizes[i];
        result.u.column_of[i].assign(mi, -1);
        std::vector<Candidate> candidates;
        candidates.reserve(static_cast<std::size_t>(mi) * d);
        for (int r = 0; r < mi; ++r) {
            for (int c = 0; c < d; ++c) {
                candidates.push_back({std::abs(x(structure.offsets[i] + r, c)), r, c});
            }
        }
        sort_descending(candidates);
        std::vector<char> used(d, 0);
        int remaining = mi;
        for (const Candidate& cand : candidates) {
            if (remaining == 0) break;
            if (result.u.column_of[i][cand.row] >= 0 || used[cand.col]) continue;
            result.u.column_of[i][cand.row] = cand.col;
            used[cand.col] = 1;
            --remaining;
        }
    }
    result.w_sync = expand_consistent(result.u);
    return result;
}

PairwiseMatchings matcheig(const PairwiseMatchings& w, int d, double tau,
                           const EigOptions& options) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "universe size estimate must be at least 1");
    if (!std::isfinite(tau)) fail(ErrorKind::InvalidArgument, "threshold must be finite");
    const ValidationResult validity = validate_pairwise(w);
    if (!validity.ok) fail(ErrorKind::Validation, validity.message);
    const BlockStructure& structure = w.structure();

    PairwiseMatchings out(structure);
    if (structure.m == 0) return out;

    const int d_eff = std::min(d, structure.m);
    const SpectralFactor factor = eig_topd(w, d_eff, options);
    for (int i = 0; i < structure.k; ++i) {
        const auto xi = factor.x.middleRows(structure.offsets[i], structure.sizes[i]);
        for (int j = i + 1; j < structure.k; ++j) {
            const auto xj = factor.x.middleRows(structure.offsets[j], structure.sizes[j]);
            const Eigen::MatrixXd b = xi * xj.transpose();
            std::vector<Candidate> candidates;
            for (int r = 0; r < b.rows(); ++r) {
                for (int c = 0; c < b.cols(); ++c) {
                    if (b(r, c) >= tau) candidates.push_back({b(r, c), r, c});
                }
            }
            sort_descending(candidates);
            std::vector<char> row_used(structure.sizes[i], 0);
            std::vector<char> col_used(structure.sizes[j], 0);
            PartialPermutation block;
            block.rows = structure.sizes[i];
            block.cols = structure.sizes[j];
            for (const Candidate& cand : candidates) {
                if (row_used[cand.row] || col_used[cand.col]) continue;
                row_used[cand.row] = 1;
                col_used[cand.col] = 1;
                block.entries.emplace_back(cand.row, cand.col);
            }
            out.set_block(i, j, block);
        }
    }
    return out;
}

}  // namespace permsync
