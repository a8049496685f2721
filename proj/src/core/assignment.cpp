#include "core/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace permsync {

LapSolution auction_lap(const AssignmentProblem& p) {
    const int r = static_cast<int>(p.benefit.rows());
    const int c = static_cast<int>(p.benefit.cols());
    if (r > c) {
        fail(ErrorKind::InvalidArgument, "assignment problem has more rows (" + std::to_string(r) +
                                             ") than columns (" + std::to_string(c) + ")");
    }
    if (!p.benefit.allFinite()) {
        fail(ErrorKind::InvalidArgument, "assignment benefits must be finite");
    }
    LapSolution solution;
    if (r == 0) return solution;

    // Work in units of 1e-6 of benefit, so inputs living on that grid become
    // integers and a final ε below 1/(n+1) makes the result exact. The
    // problem is padded to a square one with zero-benefit dummy rows: price
    // persistence across the ε-scaling rounds is only sound when every column
    // ends each round assigned.
    const Eigen::MatrixXd scaled = p.benefit * 1e6;
    const int n = c;
    const auto value_at = [&](int row, int j) { return row < r ? scaled(row, j) : 0.0; };

    const double threshold = 1.0 / (n + 1);
    std::vector<double> schedule;
    double eps = std::max(1.0, scaled.cwiseAbs().maxCoeff()) / 2.0;
    schedule.push_back(eps);
    while (eps >= threshold) {
        eps /= 5.0;
        schedule.push_back(eps);
    }

    std::vector<double> price(c, 0.0);
    std::vector<int> owner(c, -1);
    std::vector<int> column_of(n, -1);
    // Generous ceiling on bids; the auction terminates long before for any
    // feasible problem, so hitting it signals a numerical pathology.
    long long bids_left =
        1000LL * (static_cast<long long>(n) + 1) * (static_cast<long long>(c) + 1) + 1000000LL;

    for (const double round_eps : schedule) {
        std::fill(owner.begin(), owner.end(), -1);
        std::fill(column_of.begin(), column_of.end(), -1);
        std::vector<int> unassigned(n);
        for (int i = 0; i < n; ++i) unassigned[i] = n - 1 - i;  // pop row 0 first

        while (!unassigned.empty()) {
            if (--bids_left < 0) {
                fail(ErrorKind::Solver, "auction exceeded its bid budget");
            }
            const int row = unassigned.back();
            unassigned.pop_back();

            int best = 0;
            double best_value = -std::numeric_limits<double>::infinity();
            double second_value = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < c; ++j) {
                const double value = value_at(row, j) - price[j];
                if (value > best_value) {
                    second_value = best_value;
                    best_value = value;
                    best = j;
                } else if (value > second_value) {
                    second_value = value;
                }
            }
            if (c == 1) second_value = best_value;

            price[best] += best_value - second_value + round_eps;
            if (owner[best] >= 0) {
                column_of[owner[best]] = -1;
                unassigned.push_back(owner[best]);
            }
            owner[best] = row;
            column_of[row] = best;
        }
    }

    // Complementary slackness at the final ε: every row holds a column within
    // ε of the best it could get at the closing prices.
    const double final_eps = schedule.back();
    const double slack = 1e-7 * std::max(1.0, scaled.cwiseAbs().maxCoeff());
    for (int row = 0; row < n; ++row) {
        double best_value = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j) {
            best_value = std::max(best_value, value_at(row, j) - price[j]);
        }
        const double held = value_at(row, column_of[row]) - price[column_of[row]];
        if (held < best_value - final_eps - slack) {
            fail(ErrorKind::Solver, "auction result violates complementary slackness");
        }
    }

    solution.column_of_row.assign(column_of.begin(), column_of.begin() + r);
    for (int row = 0; row < r; ++row) solution.total += p.benefit(row, column_of[row]);
    return solution;
}

UniverseAssignment project_onto_universe(const Eigen::MatrixXd& vrot,
                                         const BlockStructure& structure) {
    if (vrot.rows() != structure.m) {
        fail(ErrorKind::InvalidArgument, "factor has " + std::to_string(vrot.rows()) +
                                             " rows, structure has " +
                                             std::to_string(structure.m));
    }
    const int d = static_cast<int>(vrot.cols());
    UniverseAssignment u;
    u.structure = structure;
    u.d = d;
    u.column_of.resize(structure.k);
    for (int i = 0; i < structure.k; ++i) {
        const int mi = structure.sizes[i];
        if (mi > d) {
            fail(ErrorKind::Validation,
                 "universe size too small for object " + std::to_string(i + 1));
        }
        AssignmentProblem lap;
        lap.benefit = vrot.middleRows(structure.offsets[i], mi);
        u.column_of[i] = auction_lap(lap).column_of_row;
    }
    return u;
}

UniverseAssignment prune(const Eigen::MatrixXd& vrot, const UniverseAssignment& u, double theta) {
    if (theta < 0.0) {
        fail(ErrorKind::InvalidArgument, "pruning threshold must be non-negative");
    }
    if (vrot.rows() != u.structure.m || static_cast<int>(vrot.cols()) != u.d) {
        fail(ErrorKind::InvalidArgument, "factor shape does not match the assignment");
    }
    UniverseAssignment pruned = u;
    int next_column = u.d;
    for (int i = 0; i < u.structure.k; ++i) {
        for (int r = 0; r < u.structure.sizes[i]; ++r) {
            const int row = u.structure.offsets[i] + r;
            if (vrot(row, pruned.column_of[i][r]) < theta) {
                pruned.column_of[i][r] = next_column++;
            }
        }
    }
    pruned.d = next_column;
    return pruned;
}

}  // namespace permsync
