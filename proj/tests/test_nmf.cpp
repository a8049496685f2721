#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "core/matchings.hpp"
#include "core/metrics.hpp"
#include "core/nmf.hpp"
#include "core/rng.hpp"
#include "core/rotation.hpp"
#include "core/spectral.hpp"
#include "core/synthetic.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace permsync;
using namespace permsync::testing;

namespace {

double dense_objective(const PairwiseMatchings& w, const FactorPair& f) {
    return (dense_of(w) - f.v * f.h).squaredNorm();
}

PairwiseMatchings random_singleton_graph(int n, double density, std::uint64_t seed) {
    PairwiseMatchings w(BlockStructure::from_sizes(std::vector<int>(n, 1)));
    Rng rng(seed);
    auto edge = PartialPermutation::empty(1, 1);
    edge.entries = {{0, 0}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < density) w.set_block(i, j, edge);
        }
    }
    return w;
}

FactorPair random_positive_factors(int m, int d, std::uint64_t seed) {
    Rng rng(seed);
    FactorPair f;
    f.v.resize(m, d);
    f.h.resize(d, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) f.v(i, j) = 0.05 + rng.uniform01();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j) f.h(i, j) = 0.05 + rng.uniform01();
    return f;
}

}  // namespace

TEST_SUITE("nmf") {

TEST_CASE("initial factors clamp the rotated embedding at zero") {
    SpectralFactor x;
    x.x.resize(3, 2);
    x.x << 1.0, 0.5, -0.25, 2.0, 0.75, -1.5;
    Rotation q;
    q.q = Eigen::MatrixXd::Identity(2, 2);

    const auto f = init_factors(x, q);
    CHECK(f.v(0, 0) == 1.0);
    CHECK(f.v(0, 1) == 0.5);
    CHECK(f.v(1, 0) == 0.0);  // negative entry zeroed
    CHECK(f.v(1, 1) == 2.0);
    CHECK(f.v(2, 1) == 0.0);
    CHECK((f.h - f.v.transpose()).cwiseAbs().maxCoeff() == 0.0);

    // A pure rotation reshuffles before clamping.
    Rotation swap;
    swap.q.resize(2, 2);
    swap.q << 0.0, 1.0, 1.0, 0.0;
    const auto swapped = init_factors(x, swap);
    CHECK(swapped.v(0, 0) == 0.5);
    CHECK(swapped.v(0, 1) == 1.0);
}

TEST_CASE("objective expansion matches the dense computation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = generate({.k = 4, .d = 6, .rho = 0.7, .sigma = 0.3, .seed = seed});
        const auto f = random_positive_factors(inst.w.m(), 4, seed);
        CHECK(nmf_objective(inst.w, f) ==
              doctest::Approx(dense_objective(inst.w, f)).epsilon(1e-10));
    }
}

TEST_CASE("a perfect factorisation is a fixed point") {
    const auto u = make_universe({3, 4, 3}, {0, 1, 2, /**/ 0, 1, 2, 3, /**/ 1, 2, 3}, 4);
    const auto w = expand_consistent(u);
    FactorPair f;
    f.v = Eigen::MatrixXd::Zero(w.m(), 4);
    for (int i = 0; i < u.structure.k; ++i)
        for (int r = 0; r < u.structure.sizes[i]; ++r)
            f.v(u.structure.offsets[i] + r, u.column_of[i][r]) = 1.0;
    f.h = f.v.transpose();
    REQUIRE(nmf_objective(w, f) < 1e-20);

    const auto after = nmf_step(w, f);
    CHECK((after.v - f.v).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((after.h - f.h).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("updates never increase the objective") {
    // Random symmetric binary matrices over singleton objects, random
    // positive starting factors.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto w = random_singleton_graph(12, 0.4, seed);
        auto f = random_positive_factors(12, 3, 1000 + seed);
        double objective = nmf_objective(w, f);
        for (int step = 0; step < 100; ++step) {
            f = nmf_step(w, f);
            const double next = nmf_objective(w, f);
            CHECK(next <= objective + 1e-9);
            CHECK(f.v.minCoeff() >= 0.0);
            CHECK(f.h.minCoeff() >= 0.0);
            objective = next;
        }
    }
}

TEST_CASE("noise-free instances reach a near-zero objective") {
    const auto inst = generate({.k = 6, .d = 8, .rho = 0.8, .sigma = 0.0, .seed = 3});
    const auto spectral = eig_topd(inst.w, 8);
    const auto rotation = sbra(spectral.x, inst.w.structure());
    const auto result = run_nmf(inst.w, init_factors(spectral, rotation));
    CHECK(result.objectives.back() < 1e-6);
}

TEST_CASE("rotated initialisation starts below the plain clamp") {
    // On noise-free inputs the rotated start is essentially exact while the
    // unrotated clamp throws information away.
    double rotated_total = 0.0, clamp_total = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = generate({.k = 6, .d = 8, .rho = 0.7, .sigma = 0.0, .seed = seed});
        if (inst.w.m() == 0) continue;
        const auto spectral = eig_topd(inst.w, 8);
        const auto rotation = sbra(spectral.x, inst.w.structure());
        Rotation identity;
        identity.q = Eigen::MatrixXd::Identity(8, 8);

        rotated_total += nmf_objective(inst.w, init_factors(spectral, rotation));
        clamp_total += nmf_objective(inst.w, init_factors(spectral, identity));
    }
    CHECK(rotated_total < clamp_total);
}

TEST_CASE("normalisation balances norms and preserves the product") {
    auto f = random_positive_factors(9, 3, 7);
    f.v.col(1) *= 4.0;
    f.h.row(1) /= 4.0;
    const Eigen::MatrixXd product_before = f.v * f.h;

    const auto balanced = normalise(f);
    for (int j = 0; j < 3; ++j) {
        CHECK(balanced.v.col(j).norm() ==
              doctest::Approx(balanced.h.row(j).norm()).epsilon(1e-8));
    }
    CHECK((balanced.v * balanced.h - product_before).cwiseAbs().maxCoeff() < 1e-10);

    // Already balanced pairs stay put.
    const auto again = normalise(balanced);
    CHECK((again.v - balanced.v).cwiseAbs().maxCoeff() < 1e-12);

    // Sampled entries of the product, matching the memory-safe contract.
    Rng rng(99);
    for (int sample = 0; sample < 100; ++sample) {
        const int r = rng.below_int(9);
        const int c = rng.below_int(9);
        CHECK(std::abs(balanced.v.row(r).dot(balanced.h.col(c)) - product_before(r, c)) <
              1e-10);
    }
}

TEST_CASE("zero columns are skipped and reported") {
    auto f = random_positive_factors(6, 3, 11);
    f.v.col(2).setZero();
    std::vector<int> skipped;
    const auto balanced = normalise(f, &skipped);
    CHECK(skipped == std::vector<int>{2});
    CHECK((balanced.h.row(2) - f.h.row(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a converged start returns after a single stationary step") {
    const auto u = make_universe({2, 2}, {0, 1, 0, 1}, 2);
    const auto w = expand_consistent(u);
    FactorPair f;
    f.v = Eigen::MatrixXd::Zero(4, 2);
    f.v(0, 0) = f.v(1, 1) = f.v(2, 0) = f.v(3, 1) = 1.0;
    f.h = f.v.transpose();

    const auto result = run_nmf(w, f);
    CHECK(result.iterations == 1);
    CHECK(result.objectives.size() == 2);
    CHECK(result.objectives.back() <= result.objectives.front() + 1e-12);
}

TEST_CASE("the driver's trace is monotone on noisy instances") {
    const auto inst = generate({.k = 10, .d = 20, .rho = 0.7, .sigma = 0.2, .seed = 17});
    const auto spectral = eig_topd(inst.w, 20);
    const auto rotation = sbra(spectral.x, inst.w.structure());
    const auto result = run_nmf(inst.w, init_factors(spectral, rotation));

    REQUIRE(result.objectives.size() >= 2);
    for (std::size_t i = 1; i < result.objectives.size(); ++i) {
        CHECK(result.objectives[i] <= result.objectives[i - 1] + 1e-9);
    }
    CHECK(result.objectives.back() <= result.objectives.front());
}

}  // TEST_SUITE
