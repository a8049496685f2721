#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/matchings.hpp"
#include "core/nmf.hpp"
#include "core/spectral.hpp"

namespace permsync {

/// How the factors are initialised: from the block-rotated spectral embedding
/// (the default), or by clamping the unrotated embedding (kept around as the
/// weaker reference initialisation).
enum class InitMode { Rotated, Clamp };

struct SyncConfig {
    int d = 1;            // universe size estimate
    double theta = 0.0;   // pruning threshold
    NmfConfig nmf;
    EigOptions eig;
    std::uint64_t seed = 0;
    InitMode init = InitMode::Rotated;
};

struct SyncDiagnostics {
    std::vector<double> nmf_objectives;
    int nmf_iterations = 0;
    double t_eig = 0.0;
    double t_rotation = 0.0;
    double t_nmf = 0.0;
    double t_project = 0.0;
    double t_total = 0.0;
    std::vector<std::string> warnings;
};

struct SyncResult {
    UniverseAssignment u;
    PairwiseMatchings w_sync;
    SyncDiagnostics diagnostics;
};

/// Synchronises noisy pairwise matchings: spectral embedding, block rotation,
/// non-negative factorisation, projection onto a universe assignment, pruning,
/// and expansion back to pairwise form. The result is cycle-consistent by
/// construction, and bit-identical across runs for identical inputs.
SyncResult nmfsync(const PairwiseMatchings& w, const SyncConfig& cfg);

}  // namespace permsync
