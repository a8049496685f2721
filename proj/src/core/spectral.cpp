#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace permsync {

MatchingOperator::MatchingOperator(const PairwiseMatchings& w) : m_(w.m()) {
    const auto& s = w.structure();
    contacts_.reserve(w.num_matchings());
    for (int i = 0; i < s.k; ++i) {
        for (int j = i + 1; j < s.k; ++j) {
            const auto block = w.block(i, j);
            for (const auto& [r, c] : block.entries) {
                contacts_.emplace_back(s.offsets[i] + r, s.offsets[j] + c);
            }
        }
    }
}

void MatchingOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::MatrixXd& y) const {
    y = x;  // identity diagonal
    for (const auto& [a, b] : contacts_) {
        y.row(a) += x.row(b);
        y.row(b) += x.row(a);
    }
}

namespace {

SpectralFactor factor_from_pairs(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values) {
    SpectralFactor f;
    f.vectors = vectors;
    f.eigenvalues = values;
    f.x = vectors;
    for (int j = 0; j < values.size(); ++j) {
        f.x.col(j) *= std::sqrt(std::max(values[j], 0.0));
    }
    return f;
}

SpectralFactor eig_dense(const PairwiseMatchings& w, int d) {
    const int m = w.m();
    Eigen::MatrixXd dense = Eigen::MatrixXd::Identity(m, m);
    const auto& s = w.structure();
    for (int i = 0; i < s.k; ++i) {
        for (int j = i + 1; j < s.k; ++j) {
            const auto block = w.block(i, j);
            for (const auto& [r, c] : block.entries) {
                dense(s.offsets[i] + r, s.offsets[j] + c) = 1.0;
                dense(s.offsets[j] + c, s.offsets[i] + r) = 1.0;
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::Solver, "dense eigendecomposition failed");
    }
    Eigen::MatrixXd vectors(m, d);
    Eigen::VectorXd values(d);
    for (int j = 0; j < d; ++j) {
        vectors.col(j) = solver.eigenvectors().col(m - 1 - j);
        values[j] = solver.eigenvalues()[m - 1 - j];
    }
    return factor_from_pairs(vectors, values);
}

/// Restarted Lanczos with full reorthogonalisation. The projected operator is
/// kept as a dense symmetric matrix: it is tridiagonal between restarts and
/// arrow shaped after them, and at these subspace sizes exploiting that
/// structure is not worth the bookkeeping. Breakdown (an exactly invariant
/// subspace, common for matching matrices whose eigenvalues are clique sizes)
/// is handled by injecting a fresh random direction.
SpectralFactor eig_lanczos(const MatchingOperator& op, int nev, const EigOptions& options) {
    const int n = op.size();
    const int ncv = std::min(n, std::max(2 * nev + 10, 20));
    const long long budget =
        static_cast<long long>(options.matvec_budget_per_eigenpair) * static_cast<long long>(nev);

    Eigen::MatrixXd basis(n, ncv + 1);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(ncv + 1, ncv + 1);
    Rng rng(Rng::derive(options.seed, 0x9d2c5680ULL, static_cast<std::uint64_t>(n)));

    auto random_unit = [&](int orthogonal_to) -> Eigen::VectorXd {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::VectorXd v(n);
            for (int r = 0; r < n; ++r) v[r] = rng.normal();
            if (orthogonal_to > 0) {
                const auto q = basis.leftCols(orthogonal_to);
                v -= q * (q.transpose() * v).eval();
                v -= q * (q.transpose() * v).eval();
            }
            const double norm = v.norm();
            if (norm > 1e-8) return v / norm;
        }
        return Eigen::VectorXd();
    };

    int size = 1;   // orthonormal columns currently in the basis
    int built = 0;  // columns whose image under W has been processed
    const Eigen::VectorXd start = random_unit(0);
    if (start.size() == 0) fail(ErrorKind::Solver, "could not draw a starting vector");
    basis.col(0) = start;
    long long matvecs = 0;

    Eigen::MatrixXd image(n, 1);
    while (true) {
        // Grow the subspace until the cycle is full.
        while (built < ncv && built < size) {
            op.apply(basis.col(built), image);
            ++matvecs;
            Eigen::VectorXd h = basis.leftCols(size).transpose() * image.col(0);
            image.col(0) -= basis.leftCols(size) * h;
            const Eigen::VectorXd h2 = basis.leftCols(size).transpose() * image.col(0);
            image.col(0) -= basis.leftCols(size) * h2;
            h += h2;
            proj.col(built).head(size) = h;
            proj.row(built).head(size) = h;

            const double beta = image.col(0).norm();
            const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
            if (beta > 1e-12 * scale) {
                if (size <= ncv) {
                    proj(size, built) = beta;
                    proj(built, size) = beta;
                    basis.col(size) = image.col(0) / beta;
                    ++size;
                }
            } else if (size <= ncv) {
                // Invariant subspace: continue in a fresh random direction.
                const Eigen::VectorXd v = random_unit(size);
                if (v.size() > 0) {
                    basis.col(size) = v;
                    ++size;
                }
            }
            ++built;
        }

        // Rayleigh-Ritz on the built subspace.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(proj.topLeftCorner(built, built));
        if (small.info() != Eigen::Success) {
            fail(ErrorKind::Solver, "projected eigendecomposition failed");
        }
        // Columns in descending Ritz value order.
        Eigen::MatrixXd s(built, built);
        Eigen::VectorXd theta(built);
        for (int j = 0; j < built; ++j) {
            s.col(j) = small.eigenvectors().col(built - 1 - j);
            theta[j] = small.eigenvalues()[built - 1 - j];
        }

        // With every processed image fully accounted for inside the basis,
        // the residual of a Ritz pair lives in the unprocessed tail rows.
        const int tail = size - built;
        const int want = std::min(nev, built);
        Eigen::VectorXd residuals = Eigen::VectorXd::Zero(want);
        if (tail > 0) {
            residuals =
                (proj.block(built, 0, tail, built) * s.leftCols(want)).colwise().norm().transpose();
        }
        double worst = 0.0;
        bool converged = built >= nev;
        for (int j = 0; j < want; ++j) {
            worst = std::max(worst, residuals[j]);
            if (residuals[j] > options.tolerance * std::max(1.0, std::abs(theta[j]))) {
                converged = false;
            }
        }
        if (converged) {
            const Eigen::MatrixXd vectors = basis.leftCols(built) * s.leftCols(nev);
            return factor_from_pairs(vectors, theta.head(nev));
        }
        if (matvecs >= budget) {
            std::string residual_list;
            for (int j = 0; j < want; ++j) {
                if (j > 0) residual_list += ", ";
                residual_list += std::to_string(residuals[j]);
            }
            fail(ErrorKind::Solver, "eigensolver did not converge within " +
                                        std::to_string(budget) +
                                        " iterations; residuals: " + residual_list);
        }

        // Thick restart: keep the leading Ritz vectors plus the residual
        // direction, whose couplings are recomputed on the next pass.
        const int keep = std::min(built - 1, nev + std::min(nev, 10));
        Eigen::MatrixXd kept = basis.leftCols(built) * s.leftCols(keep);
        basis.leftCols(keep) = kept;
        if (tail > 0) basis.col(keep) = basis.col(built);
        proj.setZero();
        proj.diagonal().head(keep) = theta.head(keep);
        built = keep;
        size = keep + (tail > 0 ? 1 : 0);
        if (size == built) {
            // The whole reachable space is already represented; start a new
            // direction to look for further multiplicity.
            const Eigen::VectorXd v = random_unit(size);
            if (v.size() == 0) {
                fail(ErrorKind::Solver,
                     "eigensolver stalled with residuals above tolerance (largest " +
                         std::to_string(worst) + ")");
            }
            basis.col(size) = v;
            ++size;
        }
    }
}

}  // namespace

Eigen::MatrixXd apply_matchings(const PairwiseMatchings& w,
                                const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (x.rows() != w.m()) {
        fail(ErrorKind::InvalidArgument, "operand has " + std::to_string(x.rows()) +
                                             " rows, matchings have " + std::to_string(w.m()));
    }
    MatchingOperator op(w);
    Eigen::MatrixXd y;
    op.apply(x, y);
    return y;
}

SpectralFactor eig_topd(const PairwiseMatchings& w, int d, const EigOptions& options) {
    const int m = w.m();
    if (d < 1 || d > m) {
        fail(ErrorKind::InvalidArgument,
             "requested " + std::to_string(d) + " eigenpairs of a " + std::to_string(m) +
                 "-feature problem");
    }
    if (m <= options.dense_threshold) return eig_dense(w, d);
    MatchingOperator op(w);
    return eig_lanczos(op, d, options);
}

SmallSvd svd_small(const Eigen::MatrixXd& a) {
    if (!a.allFinite()) {
        fail(ErrorKind::InvalidArgument, "matrix passed to svd_small has non-finite entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SmallSvd out;
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.singular_values = svd.singularValues();

    const int p = static_cast<int>(out.singular_values.size());
    const double scale = std::max(1.0, p > 0 ? out.singular_values[0] : 0.0);
    const double u_err =
        (out.u.transpose() * out.u - Eigen::MatrixXd::Identity(out.u.cols(), out.u.cols()))
            .cwiseAbs()
            .maxCoeff();
    const double v_err =
        (out.v.transpose() * out.v - Eigen::MatrixXd::Identity(out.v.cols(), out.v.cols()))
            .cwiseAbs()
            .maxCoeff();
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (int i = 0; i < p; ++i) sigma(i, i) = out.singular_values[i];
    const double rec_err = (out.u * sigma * out.v.transpose() - a).cwiseAbs().maxCoeff();
    bool ordered = true;
    for (int i = 0; i + 1 < p; ++i) {
        if (out.singular_values[i] < out.singular_values[i + 1]) ordered = false;
    }
    if (u_err > 1e-10 || v_err > 1e-10 || rec_err > 1e-10 * scale || !ordered ||
        (p > 0 && out.singular_values[p - 1] < 0.0)) {
        fail(ErrorKind::Solver, "singular value decomposition failed verification");
    }
    return out;
}

}  // namespace permsync
