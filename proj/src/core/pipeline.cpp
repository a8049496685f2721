#include "core/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "core/assignment.hpp"
#include "core/errors.hpp"
#include "core/rotation.hpp"

namespace permsync {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// The rotation stage degrades gracefully: a stalled block rotation keeps the
/// pipeline alive with an identity rotation and a recorded warning.
Rotation rotation_or_identity(const Eigen::MatrixXd& x, const BlockStructure& structure,
                              SyncDiagnostics& diagnostics) {
    try {
        return sbra(x, structure);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Solver) throw;
        diagnostics.warnings.push_back(std::string("block rotation incomplete (") + e.what() +
                                       "); continuing with the identity rotation");
        Rotation identity;
        identity.q = Eigen::MatrixXd::Identity(x.cols(), x.cols());
        identity.degenerate = true;
        return identity;
    }
}

}  // namespace

SyncResult nmfsync(const PairwiseMatchings& w, const SyncConfig& cfg) {
    if (cfg.d < 1) fail(ErrorKind::InvalidArgument, "universe size estimate must be at least 1");
    if (cfg.theta < 0.0) fail(ErrorKind::InvalidArgument, "pruning threshold must be non-negative");
    const ValidationResult validity = validate_pairwise(w);
    if (!validity.ok) fail(ErrorKind::Validation, validity.message);

    const BlockStructure& structure = w.structure();
    const int largest = *std::max_element(structure.sizes.begin(), structure.sizes.end());
    if (cfg.d < largest) {
        fail(ErrorKind::Validation, "universe size estimate " + std::to_string(cfg.d) +
                                        " is smaller than the largest object (" +
                                        std::to_string(largest) + " features)");
    }

    SyncResult result;
    result.u.structure = structure;
    result.u.d = cfg.d;
    result.u.column_of.assign(structure.k, {});
    if (structure.m == 0) {
        result.w_sync = expand_consistent(result.u);
        return result;
    }

    const auto t_start = std::chrono::steady_clock::now();
    auto t_mark = t_start;

    // The matrix has at most m eigenpairs; when the universe estimate exceeds
    // that, the embedding is padded with zero columns so downstream stages
    // still see cfg.d of them.
    EigOptions eig_options = cfg.eig;
    eig_options.seed = cfg.seed;
    const int d_eff = std::min(cfg.d, structure.m);
    const SpectralFactor factor = eig_topd(w, d_eff, eig_options);
    Eigen::MatrixXd x(structure.m, cfg.d);
    x.leftCols(d_eff) = factor.x;
    x.rightCols(cfg.d - d_eff).setZero();
    result.diagnostics.t_eig = seconds_since(t_mark);
    t_mark = std::chrono::steady_clock::now();

    Rotation rotation;
    if (cfg.init == InitMode::Rotated) {
        rotation = rotation_or_identity(x, structure, result.diagnostics);
    } else {
        rotation.q = Eigen::MatrixXd::Identity(cfg.d, cfg.d);
    }
    SpectralFactor padded;
    padded.x = std::move(x);
    FactorPair factors = init_factors(padded, rotation);
    result.diagnostics.t_rotation = seconds_since(t_mark);
    t_mark = std::chrono::steady_clock::now();

    NmfResult nmf = run_nmf(w, std::move(factors), cfg.nmf);
    result.diagnostics.nmf_objectives = std::move(nmf.objectives);
    result.diagnostics.nmf_iterations = nmf.iterations;
    result.diagnostics.t_nmf = seconds_since(t_mark);
    t_mark = std::chrono::steady_clock::now();

    const Rotation post = rotation_or_identity(nmf.factors.v, structure, result.diagnostics);
    const Eigen::MatrixXd vrot = nmf.factors.v * post.q;
    result.u = project_onto_universe(vrot, structure);
    result.u = prune(vrot, result.u, cfg.theta);
    result.w_sync = expand_consistent(result.u);
    result.diagnostics.t_project = seconds_since(t_mark);
    result.diagnostics.t_total = seconds_since(t_start);
    return result;
}

}  // namespace permsync
