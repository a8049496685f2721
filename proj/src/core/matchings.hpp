#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace permsync {

/// Partition of the m global features into k per-object blocks.
struct BlockStructure {
    std::vector<int> sizes;    // per-object feature counts, may contain zeros
    std::vector<int> offsets;  // offsets[i] = first global row of block i; offsets[k] = m
    int k = 0;
    int m = 0;

    static BlockStructure from_sizes(std::vector<int> sizes);

    int block_of_row(int row) const;  // row is a global index
    bool operator==(const BlockStructure& other) const { return sizes == other.sizes; }
};

/// Binary matrix with at most one entry per row and at most one per column.
/// The container itself does not enforce those constraints, so that invalid
/// data can be represented long enough to be rejected with a useful message;
/// check() reports the first violation.
struct PartialPermutation {
    int rows = 0;
    int cols = 0;
    std::vector<std::pair<int, int>> entries;  // (row, col), kept sorted by row then col

    static PartialPermutation empty(int rows, int cols);
    static PartialPermutation identity(int n);
    /// col_of_row[r] = assigned column, or -1 for an unmatched row.
    static PartialPermutation from_row_map(const std::vector<int>& col_of_row, int cols);

    PartialPermutation transposed() const;
    /// Column of each row (-1 when unmatched). Requires a valid matrix.
    std::vector<int> row_map() const;
    void sort_entries();
    std::optional<std::string> check() const;

    bool operator==(const PartialPermutation& other) const = default;
};

/// Symmetric block matrix of pairwise partial matchings with implicit
/// identity diagonal. Canonical producers store each off-diagonal block once
/// under (i, j) with i < j; block(j, i) is derived by transposition. Blocks
/// may also be stored at arbitrary coordinates so that asymmetric or
/// otherwise broken inputs survive until validate_pairwise rejects them.
class PairwiseMatchings {
public:
    PairwiseMatchings() = default;  // empty shell, usable once assigned
    explicit PairwiseMatchings(BlockStructure structure);

    const BlockStructure& structure() const { return structure_; }
    int k() const { return structure_.k; }
    int m() const { return structure_.m; }

    void set_block(int i, int j, PartialPermutation block);
    /// The (i, j) block, materialised on demand: a stored block, the
    /// transpose of its stored mirror, the identity on the diagonal, or an
    /// empty block when the pair is unmatched.
    PartialPermutation block(int i, int j) const;
    bool has_stored(int i, int j) const;
    const std::map<std::pair<int, int>, PartialPermutation>& stored() const { return blocks_; }

    /// Number of off-diagonal matchings, counted once per unordered pair.
    std::size_t num_matchings() const;

    bool operator==(const PairwiseMatchings& other) const;

private:
    BlockStructure structure_;
    std::map<std::pair<int, int>, PartialPermutation> blocks_;
};

/// Row-exact map from every feature to one of d universe columns. Within one
/// object a universe column may appear at most once.
struct UniverseAssignment {
    BlockStructure structure;
    int d = 0;
    std::vector<std::vector<int>> column_of;  // [object][local row] -> universe column

    std::optional<std::string> check() const;
    bool operator==(const UniverseAssignment& other) const = default;
};

struct ValidationResult {
    enum class Kind { None, Structural, Semantic };
    bool ok = true;
    Kind kind = Kind::None;
    std::string message;
};

/// Checks block shapes against the structure (structural errors) and then the
/// matching semantics: partial-permutation constraints per block, symmetry of
/// explicitly stored mirror pairs, identity diagonal. Reports the first
/// violation with 1-based block coordinates.
ValidationResult validate_pairwise(const PairwiseMatchings& w);

/// W = U U^T restricted to off-diagonal blocks, built sparsely per block.
PairwiseMatchings expand_consistent(const UniverseAssignment& u);

/// True when the matching graph is a disjoint union of cliques, each touching
/// any object at most once. Requires a valid W; linear in the matchings.
bool is_cycle_consistent(const PairwiseMatchings& w);

}  // namespace permsync
