#pragma once

#include <Eigen/Dense>

#include "core/matchings.hpp"

namespace permsync {

/// Mask of activated positions used while rotating an embedding toward a
/// universe assignment. Each row holds at most one active entry, recorded as
/// the column index (-1 while inactive); rows of one object block always
/// activate distinct columns.
struct ActivationMask {
    std::vector<int> column;  // per global row, -1 = inactive
    int num_active = 0;

    bool active(int row) const { return column[row] >= 0; }
    bool complete() const { return num_active == static_cast<int>(column.size()); }
};

/// An orthogonal d×d rotation. `degenerate` is set when the fit that produced
/// it had a rank-deficient cross matrix, in which case the rotation is a valid
/// maximiser but not the unique one.
struct Rotation {
    Eigen::MatrixXd q;
    bool degenerate = false;
};

/// Mask with an identity placed in the largest block (ties to the lowest
/// index). Fails when some block has more rows than columns are available.
ActivationMask initial_mask(const BlockStructure& structure, int d);

/// Orthogonal Q maximising the total mass of XQ at the mask's active
/// positions, via the Procrustes solution Q = U V^T from the SVD of X^T C.
Rotation solve_rotation(const Eigen::MatrixXd& x, const ActivationMask& mask);

/// One activation round: all active entries stay, and every inactive row of
/// the block with the most inactive rows (ties to the lowest index) gains an
/// entry. Rows claim columns greedily by descending magnitude of x_rot,
/// skipping columns already active within the block; exact ties prefer the
/// lower row, then the lower column. A complete mask is returned unchanged.
ActivationMask update_mask(const ActivationMask& mask, const Eigen::MatrixXd& x_rot,
                           const BlockStructure& structure);

/// Successive block rotation: alternate solve_rotation and update_mask until
/// every row is active, then return the final rotation.
Rotation sbra(const Eigen::MatrixXd& x, const BlockStructure& structure);

}  // namespace permsync
