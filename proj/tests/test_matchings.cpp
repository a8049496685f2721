#include <string>

#include "core/errors.hpp"
#include "core/matchings.hpp"
#include "core/metrics.hpp"
#include "core/synthetic.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace permsync;
using namespace permsync::testing;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("matchings") {

TEST_CASE("partial permutation basics") {
    const auto id = PartialPermutation::identity(3);
    CHECK(id.entries.size() == 3);
    CHECK(id == id.transposed());
    CHECK_FALSE(id.check().has_value());

    const auto p = PartialPermutation::from_row_map({2, -1, 0}, 4);
    CHECK(p.rows == 3);
    CHECK(p.cols == 4);
    CHECK(p.entries == std::vector<std::pair<int, int>>{{0, 2}, {2, 0}});
    CHECK(p.row_map() == std::vector<int>{2, -1, 0});
    const auto pt = p.transposed();
    CHECK(pt.rows == 4);
    CHECK(pt.entries == std::vector<std::pair<int, int>>{{0, 2}, {2, 0}});

    auto bad = PartialPermutation::empty(2, 2);
    bad.entries = {{0, 0}, {0, 1}};
    CHECK(bad.check().has_value());
}

TEST_CASE("three objects over a four-feature universe expand to hand-computed blocks") {
    // Objects with 3, 4 and 2 features; universe columns written as 0..3.
    const auto u = make_universe({3, 4, 2}, {0, 1, 2, /**/ 1, 0, 3, 2, /**/ 2, 0}, 4);
    REQUIRE_FALSE(u.check().has_value());
    const auto w = expand_consistent(u);

    CHECK(w.block(0, 1).entries == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {2, 3}});
    CHECK(w.block(0, 2).entries == std::vector<std::pair<int, int>>{{0, 1}, {2, 0}});
    CHECK(w.block(1, 2).entries == std::vector<std::pair<int, int>>{{1, 1}, {3, 0}});
    CHECK(w.block(1, 0) == w.block(0, 1).transposed());
    CHECK(w.block(2, 2) == PartialPermutation::identity(2));

    CHECK(validate_pairwise(w).ok);
    CHECK(is_cycle_consistent(w));
    CHECK(w.num_matchings() == 7);
}

TEST_CASE("full identity assignments give identity blocks everywhere") {
    const int k = 3, d = 4;
    std::vector<int> columns;
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < d; ++c) columns.push_back(c);
    const auto w = expand_consistent(make_universe({d, d, d}, columns, d));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            CHECK(w.block(i, j) == PartialPermutation::identity(d));
        }
    }
}

TEST_CASE("random partial assignments expand to cycle-consistent matchings") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = generate({.k = 4, .d = 5, .rho = 0.6, .sigma = 0.0, .seed = seed});
        CHECK(validate_pairwise(inst.w).ok);
        CHECK(is_cycle_consistent(inst.w));
        // Every composed path must agree with the direct matching.
        CHECK(dense_cycle_error(inst.w) == 0.0);
    }
}

TEST_CASE("validation rejects a block with two entries in one row") {
    PairwiseMatchings w(BlockStructure::from_sizes({2, 2, 2}));
    auto block = PartialPermutation::empty(2, 2);
    block.entries = {{0, 0}, {0, 1}};
    w.set_block(0, 1, block);
    const auto result = validate_pairwise(w);
    CHECK_FALSE(result.ok);
    CHECK(result.kind == ValidationResult::Kind::Semantic);
    CHECK(contains(result.message, "row-sum violation"));
    CHECK(contains(result.message, "block (1, 2)"));
}

TEST_CASE("validation rejects mismatched mirror blocks") {
    PairwiseMatchings w(BlockStructure::from_sizes({2, 2}));
    auto ab = PartialPermutation::empty(2, 2);
    ab.entries = {{0, 0}};
    auto ba = PartialPermutation::empty(2, 2);
    ba.entries = {{1, 1}};
    w.set_block(0, 1, ab);
    w.set_block(1, 0, ba);
    const auto result = validate_pairwise(w);
    CHECK_FALSE(result.ok);
    CHECK(result.kind == ValidationResult::Kind::Semantic);
    CHECK(contains(result.message, "symmetry violation"));
}

TEST_CASE("validation rejects a block with the wrong shape") {
    PairwiseMatchings w(BlockStructure::from_sizes({2, 3}));
    auto block = PartialPermutation::empty(3, 3);
    block.entries = {{0, 0}};
    w.set_block(0, 1, block);
    const auto result = validate_pairwise(w);
    CHECK_FALSE(result.ok);
    CHECK(result.kind == ValidationResult::Kind::Structural);
}

TEST_CASE("deleting one edge from a three-clique breaks cycle consistency") {
    PairwiseMatchings w(BlockStructure::from_sizes({1, 1, 1}));
    auto one = PartialPermutation::empty(1, 1);
    one.entries = {{0, 0}};
    w.set_block(0, 1, one);
    w.set_block(1, 2, one);
    w.set_block(0, 2, one);
    REQUIRE(is_cycle_consistent(w));

    w.set_block(0, 2, PartialPermutation::empty(1, 1));
    CHECK(validate_pairwise(w).ok);
    CHECK_FALSE(is_cycle_consistent(w));
    CHECK(dense_cycle_error(w) > 0.0);
}

TEST_CASE("universe assignment checks reject bad columns") {
    auto u = make_universe({2, 2}, {0, 1, 0, 0}, 3);
    CHECK(u.check().has_value());  // object 2 uses column 0 twice
    CHECK(contains(*u.check(), "twice"));
    CHECK_THROWS_AS(expand_consistent(u), Error);

    auto out_of_range = make_universe({1, 1}, {0, 5}, 3);
    CHECK(out_of_range.check().has_value());
}

TEST_CASE("matching count ignores diagonals and counts unordered pairs once") {
    const auto u = make_universe({2, 2}, {0, 1, 1, 0}, 2);
    const auto w = expand_consistent(u);
    CHECK(w.num_matchings() == 2);
    CHECK(w.block(0, 1).entries.size() == 2);
}

}  // TEST_SUITE
