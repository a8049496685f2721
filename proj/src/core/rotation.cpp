#include "core/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/spectral.hpp"

namespace permsync {

ActivationMask initial_mask(const BlockStructure& structure, int d) {
    for (int i = 0; i < structure.k; ++i) {
        if (structure.sizes[i] > d) {
            fail(ErrorKind::Validation, "object " + std::to_string(i + 1) + " has " +
                                            std::to_string(structure.sizes[i]) +
                                            " features but the universe size is " +
                                            std::to_string(d));
        }
    }
    int largest = 0;
    for (int i = 1; i < structure.k; ++i) {
        if (structure.sizes[i] > structure.sizes[largest]) largest = i;
    }
    ActivationMask mask;
    mask.column.assign(structure.m, -1);
    for (int r = 0; r < structure.sizes[largest]; ++r) {
        mask.column[structure.offsets[largest] + r] = r;
    }
    mask.num_active = structure.sizes[largest];
    return mask;
}

Rotation solve_rotation(const Eigen::MatrixXd& x, const ActivationMask& mask) {
    if (!x.allFinite()) {
        fail(ErrorKind::InvalidArgument, "rotation input has non-finite entries");
    }
    const int d = static_cast<int>(x.cols());
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(d, d);
    for (int r = 0; r < static_cast<int>(mask.column.size()); ++r) {
        if (mask.column[r] >= 0) cross.col(mask.column[r]) += x.row(r).transpose();
    }
    const SmallSvd svd = svd_small(cross);
    Rotation rotation;
    rotation.q = svd.u * svd.v.transpose();
    const double largest = d > 0 ? svd.singular_values[0] : 0.0;
    const double smallest = d > 0 ? svd.singular_values[d - 1] : 0.0;
    rotation.degenerate = smallest <= 1e-10 * std::max(1.0, largest);
    return rotation;
}

ActivationMask update_mask(const ActivationMask& mask, const Eigen::MatrixXd& x_rot,
                           const BlockStructure& structure) {
    if (mask.complete()) return mask;

    int selected = -1;
    int most_inactive = 0;
    for (int i = 0; i < structure.k; ++i) {
        int inactive = 0;
        for (int r = 0; r < structure.sizes[i]; ++r) {
            if (!mask.active(structure.offsets[i] + r)) ++inactive;
        }
        if (inactive > most_inactive) {
            most_inactive = inactive;
            selected = i;
        }
    }

    const int d = static_cast<int>(x_rot.cols());
    std::vector<char> used(d, 0);
    for (int r = 0; r < structure.sizes[selected]; ++r) {
        const int col = mask.column[structure.offsets[selected] + r];
        if (col >= 0) used[col] = 1;
    }

    struct Candidate {
        double magnitude;
        int row;
        int col;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(most_inactive) * d);
    for (int r = 0; r < structure.sizes[selected]; ++r) {
        const int row = structure.offsets[selected] + r;
        if (mask.active(row)) continue;
        for (int c = 0; c < d; ++c) {
            candidates.push_back({std::abs(x_rot(row, c)), row, c});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });

    ActivationMask next = mask;
    int remaining = most_inactive;
    for (const Candidate& cand : candidates) {
        if (remaining == 0) break;
        if (next.active(cand.row) || used[cand.col]) continue;
        next.column[cand.row] = cand.col;
        used[cand.col] = 1;
        ++next.num_active;
        --remaining;
    }
    if (remaining > 0) {
        fail(ErrorKind::Validation,
             "cannot activate all rows of object " + std::to_string(selected + 1) +
                 " without reusing a universe column");
    }
    return next;
}

Rotation sbra(const Eigen::MatrixXd& x, const BlockStructure& structure) {
    if (x.rows() != structure.m) {
        fail(ErrorKind::InvalidArgument, "embedding has " + std::to_string(x.rows()) +
                                             " rows, structure has " +
                                             std::to_string(structure.m));
    }
    const int d = static_cast<int>(x.cols());
    ActivationMask mask = initial_mask(structure, d);
    for (int round = 0; round <= structure.k; ++round) {
        const Rotation rotation = solve_rotation(x, mask);
        if (mask.complete()) return rotation;
        mask = update_mask(mask, x * rotation.q, structure);
    }
    fail(ErrorKind::Solver, "block rotation did not cover every row");
}

}  // namespace permsync
