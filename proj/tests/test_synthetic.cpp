#include <numeric>

#include "core/matchings.hpp"
#include "core/metrics.hpp"
#include "core/synthetic.hpp"
#include "doctest.h"

using namespace permsync;

TEST_SUITE("synthetic") {

TEST_CASE("zero noise reproduces the ground truth") {
    const auto inst = generate({.k = 6, .d = 10, .rho = 0.7, .sigma = 0.0, .seed = 21});
    CHECK(inst.w == inst.w_gt);
    CHECK(cycle_error(inst.w) == 0.0);
    CHECK(inst.w_gt == expand_consistent(inst.u_gt));
}

TEST_CASE("full observation keeps every feature") {
    const auto inst = generate({.k = 5, .d = 7, .rho = 1.0, .sigma = 0.2, .seed = 4});
    for (const int size : inst.w.structure().sizes) CHECK(size == 7);
}

TEST_CASE("noise perturbs while keeping blocks valid") {
    const auto inst = generate({.k = 20, .d = 20, .rho = 0.7, .sigma = 0.3, .seed = 9});
    CHECK(validate_pairwise(inst.w).ok);
    CHECK(gt_error(inst.w, inst.w_gt) > 0.0);
}

TEST_CASE("generation is reproducible bit for bit") {
    const GenParams params{.k = 8, .d = 12, .rho = 0.6, .sigma = 0.4, .seed = 77};
    const auto a = generate(params);
    const auto b = generate(params);
    CHECK(a.w == b.w);
    CHECK(a.w_gt == b.w_gt);
    CHECK(a.u_gt == b.u_gt);

    const auto c = generate({.k = 8, .d = 12, .rho = 0.6, .sigma = 0.4, .seed = 78});
    CHECK_FALSE(c.w == a.w);
}

TEST_CASE("parameter endpoints stay valid") {
    for (const double rho : {0.0, 0.35, 1.0}) {
        for (const double sigma : {0.0, 0.5, 1.0}) {
            const auto inst =
                generate({.k = 4, .d = 6, .rho = rho, .sigma = sigma, .seed = 13});
            CHECK(validate_pairwise(inst.w).ok);
            CHECK(validate_pairwise(inst.w_gt).ok);
            if (rho == 0.0) CHECK(inst.w.m() == 0);
        }
    }
}

TEST_CASE("observation rate controls the expected object size") {
    const auto inst = generate({.k = 30, .d = 50, .rho = 0.5, .sigma = 0.0, .seed = 1});
    const auto& sizes = inst.w.structure().sizes;
    const int total = std::accumulate(sizes.begin(), sizes.end(), 0);
    CHECK(total > 650);  // k*d*rho = 750 expected
    CHECK(total < 850);
}

}  // TEST_SUITE
