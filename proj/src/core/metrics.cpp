#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "core/errors.hpp"

namespace permsync {

namespace {

/// Row maps of every ordered block (a, b), diagonal identities included.
/// rm[a][b][r] is the column matched to row r of block (a, b), or -1.
std::vector<std::vector<std::vector<int>>> ordered_row_maps(const PairwiseMatchings& w) {
    const auto& s = w.structure();
    std::vector<std::vector<std::vector<int>>> rm(s.k, std::vector<std::vector<int>>(s.k));
    for (int a = 0; a < s.k; ++a) {
        for (int b = 0; b < s.k; ++b) {
            rm[a][b].assign(s.sizes[a], -1);
            if (a == b) {
                for (int r = 0; r < s.sizes[a]; ++r) rm[a][b][r] = r;
            }
        }
    }
    for (int a = 0; a < s.k; ++a) {
        for (int b = a + 1; b < s.k; ++b) {
            const auto block = w.block(a, b);
            for (const auto& [r, c] : block.entries) {
                rm[a][b][r] = c;
                rm[b][a][c] = r;
            }
        }
    }
    return rm;
}

}  // namespace

double cycle_error(const PairwiseMatchings& w) {
    const auto& s = w.structure();
    const auto rm = ordered_row_maps(w);

    double total = 0.0;
    for (int i = 0; i < s.k; ++i) {
        for (int l = 0; l < s.k; ++l) {
            const auto& through = rm[i][l];
            for (int j = 0; j < s.k; ++j) {
                // Compare P_il * P_lj with P_ij on the rows matched in P_il
                // and the columns matched in P_lj. Entries are 0/1, so the
                // squared Frobenius mismatch is a disagreement count.
                std::size_t mismatches = 0;
                for (int r = 0; r < s.sizes[i]; ++r) {
                    const int via = through[r];
                    if (via < 0) continue;
                    const int composed = rm[l][j][via];
                    int direct = rm[i][j][r];
                    if (direct >= 0 && rm[j][l][direct] < 0) direct = -1;  // outside C_lj
                    if (composed == direct) continue;
                    mismatches += (composed >= 0 && direct >= 0) ? 2 : 1;
                }
                total += std::sqrt(static_cast<double>(mismatches));
            }
        }
    }
    const double k = static_cast<double>(s.k);
    return total / (k * k * k);
}

double gt_error(const PairwiseMatchings& w, const PairwiseMatchings& gt) {
    if (!(w.structure() == gt.structure())) {
        fail(ErrorKind::InvalidArgument, "matchings and ground truth have different structures");
    }
    std::size_t differing = 0;
    for (int i = 0; i < w.k(); ++i) {
        for (int j = i + 1; j < w.k(); ++j) {
            const auto a = w.block(i, j).entries;
            const auto b = gt.block(i, j).entries;
            std::vector<std::pair<int, int>> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                          std::back_inserter(diff));
            differing += diff.size();
        }
    }
    // Each differing matching is counted once, at its i < j position; the
    // mirrored copy and the identical diagonals contribute nothing.
    return std::sqrt(static_cast<double>(differing));
}

PrfResult pr_f(const PairwiseMatchings& w, const PairwiseMatchings& gt) {
    if (!(w.structure() == gt.structure())) {
        fail(ErrorKind::InvalidArgument, "matchings and ground truth have different structures");
    }
    std::size_t tp = 0, in_w = 0, in_gt = 0;
    for (int i = 0; i < w.k(); ++i) {
        for (int j = i + 1; j < w.k(); ++j) {
            const auto a = w.block(i, j).entries;
            const auto b = gt.block(i, j).entries;
            std::vector<std::pair<int, int>> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(common));
            tp += common.size();
            in_w += a.size();
            in_gt += b.size();
        }
    }
    PrfResult r;
    r.num_matchings = static_cast<long long>(in_w);
    r.precision = in_w > 0 ? static_cast<double>(tp) / static_cast<double>(in_w) : 0.0;
    r.recall = in_gt > 0 ? static_cast<double>(tp) / static_cast<double>(in_gt) : 0.0;
    r.fscore = (r.precision + r.recall) > 0.0
                   ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                   : 0.0;
    return r;
}

}  // namespace permsync
