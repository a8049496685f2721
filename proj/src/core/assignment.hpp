#pragma once

#include <vector>

#include <Eigen/Dense>

#include "core/matchings.hpp"

namespace permsync {

/// Rectangular assignment problem in maximisation form. Every row must
/// receive a column, so r ≤ c.
struct AssignmentProblem {
    Eigen::MatrixXd benefit;
};

struct LapSolution {
    std::vector<int> column_of_row;
    double total = 0.0;
};

/// Injective row→column map maximising total benefit, via the auction
/// algorithm with ε-scaling. Exact for benefits on a 1e-6 grid; for general
/// float benefits the total is optimal within the final ε gap, which the
/// solution is verified against before returning.
LapSolution auction_lap(const AssignmentProblem& p);

/// Nearest universe assignment to a rotated factor: one independent LAP per
/// object block, so each row gets exactly one universe column and no column
/// repeats within a block.
UniverseAssignment project_onto_universe(const Eigen::MatrixXd& vrot,
                                         const BlockStructure& structure);

/// Moves every assignment whose confidence vrot[r, c] falls below theta to a
/// fresh singleton universe column (appended in global row order), so weakly
/// supported features end up matched only to themselves. Row coverage is
/// preserved; the universe may grow.
UniverseAssignment prune(const Eigen::MatrixXd& vrot, const UniverseAssignment& u, double theta);

}  // namespace permsync
