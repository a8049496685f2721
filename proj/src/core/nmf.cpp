#include "core/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace permsync {

namespace {

void check_shapes(const PairwiseMatchings& w, const FactorPair& f) {
    if (f.v.rows() != w.m() || f.h.cols() != w.m() || f.v.cols() != f.h.rows()) {
        fail(ErrorKind::InvalidArgument, "factor shapes do not match the matching matrix");
    }
}

double objective_with(const MatchingOperator& op, std::int64_t matchings, const FactorPair& f) {
    // ‖W‖² for a binary symmetric matrix with unit diagonal.
    const double norm_w = static_cast<double>(op.size()) + 2.0 * static_cast<double>(matchings);
    Eigen::MatrixXd wv;
    op.apply(f.v, wv);
    const double cross = wv.cwiseProduct(f.h.transpose()).sum();
    const Eigen::MatrixXd gram_v = f.v.transpose() * f.v;
    const Eigen::MatrixXd gram_h = f.h * f.h.transpose();
    return norm_w - 2.0 * cross + gram_v.cwiseProduct(gram_h).sum();
}

void step_with(const MatchingOperator& op, FactorPair& f, const NmfConfig& cfg) {
    Eigen::MatrixXd wv;
    op.apply(f.v, wv);  // (V^T W)^T by symmetry of W
    const Eigen::MatrixXd gram_v = f.v.transpose() * f.v;
    f.h.array() *= wv.transpose().array() / ((gram_v * f.h).array() + cfg.epsilon);

    Eigen::MatrixXd wht;
    op.apply(f.h.transpose(), wht);
    const Eigen::MatrixXd gram_h = f.h * f.h.transpose();
    f.v.array() *= wht.array() / ((f.v * gram_h).array() + cfg.epsilon);

    if (!f.h.allFinite() || !f.v.allFinite()) {
        fail(ErrorKind::Solver, "factor update produced non-finite values");
    }
}

}  // namespace

FactorPair init_factors(const SpectralFactor& x, const Rotation& q) {
    if (x.x.cols() != q.q.rows()) {
        fail(ErrorKind::InvalidArgument, "spectral factor and rotation disagree on the rank");
    }
    FactorPair f;
    f.v = (x.x * q.q).cwiseMax(0.0);
    f.h = f.v.transpose();
    return f;
}

double nmf_objective(const PairwiseMatchings& w, const FactorPair& f) {
    check_shapes(w, f);
    const MatchingOperator op(w);
    return objective_with(op, w.num_matchings(), f);
}

FactorPair nmf_step(const PairwiseMatchings& w, const FactorPair& f, const NmfConfig& cfg) {
    check_shapes(w, f);
    if (cfg.epsilon <= 0.0 || cfg.rel_tolerance <= 0.0) {
        fail(ErrorKind::InvalidArgument, "epsilon and the stopping tolerance must be positive");
    }
    FactorPair next = f;
    step_with(MatchingOperator(w), next, cfg);
    return next;
}

NmfResult run_nmf(const PairwiseMatchings& w, FactorPair f0, const NmfConfig& cfg) {
    check_shapes(w, f0);
    if (cfg.epsilon <= 0.0 || cfg.rel_tolerance <= 0.0) {
        fail(ErrorKind::InvalidArgument, "epsilon and the stopping tolerance must be positive");
    }
    const MatchingOperator op(w);
    const std::int64_t matchings = w.num_matchings();

    NmfResult result;
    result.factors = std::move(f0);
    result.objectives.push_back(objective_with(op, matchings, result.factors));
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        try {
            step_with(op, result.factors, cfg);
        } catch (const Error& e) {
            fail(e.kind(), std::string(e.what()) + " at iteration " + std::to_string(iter + 1));
        }
        const double prev = result.objectives.back();
        const double cur = objective_with(op, matchings, result.factors);
        result.objectives.push_back(cur);
        result.iterations = iter + 1;
        if (prev - cur < cfg.rel_tolerance * std::max(prev, 1e-30)) break;
    }
    result.factors = normalise(std::move(result.factors));
    return result;
}

FactorPair normalise(FactorPair f, std::vector<int>* skipped) {
    for (int j = 0; j < f.v.cols(); ++j) {
        const double vn = f.v.col(j).norm();
        const double hn = f.h.row(j).norm();
        if (vn <= 0.0 || hn <= 0.0) {
            if (skipped) skipped->push_back(j);
            continue;
        }
        const double s = std::sqrt(vn / hn);
        f.v.col(j) /= s;
        f.h.row(j) *= s;
    }
    return f;
}

}  // namespace permsync
