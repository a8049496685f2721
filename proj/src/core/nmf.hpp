#pragma once

#include <vector>

#include <Eigen/Dense>

#include "core/matchings.hpp"
#include "core/rotation.hpp"
#include "core/spectral.hpp"

namespace permsync {

/// Non-negative factor pair approximating W as V * H. A normalised pair has
/// matching ℓ2 norms between column j of V and row j of H for every j.
struct FactorPair {
    Eigen::MatrixXd v;  // m x d, entries >= 0
    Eigen::MatrixXd h;  // d x m, entries >= 0
};

struct NmfConfig {
    double epsilon = 1e-12;      // denominator stabiliser
    int max_iterations = 500;
    double rel_tolerance = 1e-6;  // stop once the relative objective drop falls below this
};

struct NmfResult {
    FactorPair factors;
    std::vector<double> objectives;  // objective before iterating, then after each step
    int iterations = 0;
};

/// V = (XQ)_+ with negative entries zeroed, H = V^T.
FactorPair init_factors(const SpectralFactor& x, const Rotation& q);

/// ‖W − VH‖_F², evaluated through the expansion
/// ‖W‖² − 2⟨W, VH⟩ + ⟨V^TV, HH^T⟩ so the dense product VH is never formed.
double nmf_objective(const PairwiseMatchings& w, const FactorPair& f);

/// One multiplicative update: H ← H ⊙ (V^TW) ⊘ ((V^TV)H + ε), then with the
/// new H, V ← V ⊙ (WH^T) ⊘ (V(HH^T) + ε).
FactorPair nmf_step(const PairwiseMatchings& w, const FactorPair& f, const NmfConfig& cfg = {});

/// Multiplicative updates until the relative objective decrease drops below
/// cfg.rel_tolerance or cfg.max_iterations is reached, then one balancing
/// normalisation. The objective trace starts at the initial value.
NmfResult run_nmf(const PairwiseMatchings& w, FactorPair f0, const NmfConfig& cfg = {});

/// Rescales each column/row pair so that ‖V_j‖ = ‖H_j‖, leaving the product
/// VH untouched. Pairs where either side has zero norm are left alone; their
/// indices are appended to *skipped when given.
FactorPair normalise(FactorPair f, std::vector<int>* skipped = nullptr);

}  // namespace permsync
