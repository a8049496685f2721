#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "core/matchings.hpp"

namespace permsync {

struct EigOptions {
    double tolerance = 1e-8;    // residual tolerance per eigenpair
    int matvec_budget_per_eigenpair = 300;
    int dense_threshold = 512;  // direct solver for m at or below this size
    std::uint64_t seed = 0;     // start vector of the iterative path
};

/// Rank-d spectral factor of a matching matrix. `x` carries the eigenvectors
/// scaled by sqrt of the eigenvalues clamped at zero, so x * x^T is the best
/// positive semidefinite rank-d approximation of W.
struct SpectralFactor {
    Eigen::MatrixXd x;            // m x d, scaled
    Eigen::MatrixXd vectors;      // m x d, orthonormal eigenvectors
    Eigen::VectorXd eigenvalues;  // d largest, descending, unclamped
};

/// Top-d eigenpairs (largest algebraic) of W. Problems up to
/// options.dense_threshold rows go through a direct solver; larger ones
/// through restarted Lanczos with full reorthogonalisation, which only ever
/// touches W through the block-sparse multiply.
SpectralFactor eig_topd(const PairwiseMatchings& w, int d, const EigOptions& options = {});

/// Matching matrix as a multiply-only operator: the global (row, col) index
/// pairs of all off-diagonal matchings, flattened once so repeated products
/// cost O(cols * matchings) without revisiting the block map.
class MatchingOperator {
public:
    explicit MatchingOperator(const PairwiseMatchings& w);

    int size() const { return m_; }
    std::int64_t num_matchings() const { return static_cast<std::int64_t>(contacts_.size()); }

    /// y = W * x (the identity diagonal is implicit in the matrix).
    void apply(const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::MatrixXd& y) const;

private:
    int m_;
    std::vector<std::pair<int, int>> contacts_;
};

/// y = W * x for a block-sparse matching matrix, O(d * matchings) per apply.
Eigen::MatrixXd apply_matchings(const PairwiseMatchings& w, const Eigen::Ref<const Eigen::MatrixXd>& x);

struct SmallSvd {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;  // descending, non-negative
    Eigen::MatrixXd v;
};

/// Full SVD of a small dense matrix, with orthogonality of the factors and
/// the reconstruction checked to 1e-10.
SmallSvd svd_small(const Eigen::MatrixXd& a);

}  // namespace permsync
