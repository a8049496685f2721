#include <algorithm>
#include <cstdint>

#include "core/baselines.hpp"
#include "core/matchings.hpp"
#include "core/metrics.hpp"
#include "core/pipeline.hpp"
#include "core/synthetic.hpp"
#include "doctest.h"

using namespace permsync;

TEST_SUITE("baselines") {

TEST_CASE("the spectral baseline recovers full noise-free matchings") {
    const auto inst = generate({.k = 5, .d = 8, .rho = 1.0, .sigma = 0.0, .seed = 6});
    const auto result = spectral_greedy(inst.w, 8);
    CHECK(result.w_sync == inst.w);
    CHECK(cycle_error(result.w_sync) == 0.0);
}

TEST_CASE("the spectral baseline is always cycle-consistent") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst =
            generate({.k = 6, .d = 9, .rho = 0.6, .sigma = 0.4, .seed = 40 + seed});
        const auto result = spectral_greedy(inst.w, 9);
        CHECK(cycle_error(result.w_sync) == 0.0);
        CHECK(validate_pairwise(result.w_sync).ok);
    }
}

TEST_CASE("a tight universe estimate still yields a valid assignment") {
    const auto inst = generate({.k = 5, .d = 10, .rho = 0.9, .sigma = 0.2, .seed = 15});
    int largest = 0;
    for (const int size : inst.w.structure().sizes) largest = std::max(largest, size);
    const auto result = spectral_greedy(inst.w, largest);
    CHECK(result.u.d == largest);
    CHECK_FALSE(result.u.check().has_value());
}

TEST_CASE("synchronisation beats the spectral baseline on noisy inputs") {
    double nmf_total = 0.0, spectral_total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst =
            generate({.k = 10, .d = 15, .rho = 0.7, .sigma = 0.3, .seed = 2000 + seed});
        SyncConfig cfg;
        cfg.d = 15;
        nmf_total += gt_error(nmfsync(inst.w, cfg).w_sync, inst.w_gt);
        spectral_total += gt_error(spectral_greedy(inst.w, 15).w_sync, inst.w_gt);
    }
    CHECK(spectral_total >= nmf_total);
}

TEST_CASE("block projection reproduces noise-free matchings") {
    const auto inst = generate({.k = 5, .d = 8, .rho = 0.8, .sigma = 0.0, .seed = 23});
    const auto w_sync = matcheig(inst.w, 8);
    CHECK(w_sync == inst.w);
    CHECK(cycle_error(w_sync) == 0.0);
}

TEST_CASE("block projection usually breaks cycle consistency under noise") {
    int inconsistent = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst =
            generate({.k = 8, .d = 12, .rho = 0.7, .sigma = 0.4, .seed = 600 + seed});
        if (cycle_error(matcheig(inst.w, 12)) > 0.0) ++inconsistent;
    }
    CHECK(inconsistent > 10);
}

TEST_CASE("a threshold above one empties the block projection") {
    const auto inst = generate({.k = 5, .d = 8, .rho = 0.8, .sigma = 0.2, .seed = 31});
    const auto w_sync = matcheig(inst.w, 8, 1.0 + 1e-6);
    CHECK(w_sync.num_matchings() == 0);
}

}  // TEST_SUITE
