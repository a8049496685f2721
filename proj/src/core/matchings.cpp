#include "core/matchings.hpp"

#include <algorithm>
#include <numeric>

#include "core/errors.hpp"

namespace permsync {

BlockStructure BlockStructure::from_sizes(std::vector<int> sizes) {
    if (sizes.size() < 2) {
        fail(ErrorKind::InvalidArgument, "block structure needs at least two objects");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 0) {
            fail(ErrorKind::InvalidArgument,
                 "object " + std::to_string(i + 1) + " has negative feature count");
        }
    }
    BlockStructure s;
    s.sizes = std::move(sizes);
    s.k = static_cast<int>(s.sizes.size());
    s.offsets.resize(s.k + 1, 0);
    for (int i = 0; i < s.k; ++i) s.offsets[i + 1] = s.offsets[i] + s.sizes[i];
    s.m = s.offsets[s.k];
    return s;
}

int BlockStructure::block_of_row(int row) const {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), row);
    return static_cast<int>(it - offsets.begin()) - 1;
}

PartialPermutation PartialPermutation::empty(int rows, int cols) {
    PartialPermutation p;
    p.rows = rows;
    p.cols = cols;
    return p;
}

PartialPermutation PartialPermutation::identity(int n) {
    PartialPermutation p;
    p.rows = n;
    p.cols = n;
    p.entries.reserve(n);
    for (int i = 0; i < n; ++i) p.entries.emplace_back(i, i);
    return p;
}

PartialPermutation PartialPermutation::from_row_map(const std::vector<int>& col_of_row, int cols) {
    PartialPermutation p;
    p.rows = static_cast<int>(col_of_row.size());
    p.cols = cols;
    for (int r = 0; r < p.rows; ++r) {
        if (col_of_row[r] >= 0) p.entries.emplace_back(r, col_of_row[r]);
    }
    return p;
}

PartialPermutation PartialPermutation::transposed() const {
    PartialPermutation t;
    t.rows = cols;
    t.cols = rows;
    t.entries.reserve(entries.size());
    for (const auto& [r, c] : entries) t.entries.emplace_back(c, r);
    t.sort_entries();
    return t;
}

std::vector<int> PartialPermutation::row_map() const {
    std::vector<int> map(rows, -1);
    for (const auto& [r, c] : entries) map[r] = c;
    return map;
}

void PartialPermutation::sort_entries() {
    std::sort(entries.begin(), entries.end());
}

std::optional<std::string> PartialPermutation::check() const {
    std::vector<bool> row_used(rows, false), col_used(cols, false);
    for (const auto& [r, c] : entries) {
        if (r < 0 || r >= rows || c < 0 || c >= cols) {
            return "entry (" + std::to_string(r + 1) + ", " + std::to_string(c + 1) +
                   ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) + " block";
        }
        if (row_used[r]) return "row " + std::to_string(r + 1) + " has more than one entry";
        if (col_used[c]) return "column " + std::to_string(c + 1) + " has more than one entry";
        row_used[r] = true;
        col_used[c] = true;
    }
    return std::nullopt;
}

PairwiseMatchings::PairwiseMatchings(BlockStructure structure) : structure_(std::move(structure)) {}

void PairwiseMatchings::set_block(int i, int j, PartialPermutation block) {
    if (i < 0 || i >= structure_.k || j < 0 || j >= structure_.k) {
        fail(ErrorKind::InvalidArgument,
             "block (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                 ") outside a " + std::to_string(structure_.k) + "-object structure");
    }
    block.sort_entries();
    if (block.entries.empty() && i != j) {
        blocks_.erase({i, j});
        return;
    }
    blocks_[{i, j}] = std::move(block);
}

PartialPermutation PairwiseMatchings::block(int i, int j) const {
    const auto it = blocks_.find({i, j});
    if (it != blocks_.end()) return it->second;
    const auto mirror = blocks_.find({j, i});
    if (mirror != blocks_.end()) return mirror->second.transposed();
    if (i == j) return PartialPermutation::identity(structure_.sizes[i]);
    return PartialPermutation::empty(structure_.sizes[i], structure_.sizes[j]);
}

bool PairwiseMatchings::has_stored(int i, int j) const {
    return blocks_.count({i, j}) > 0;
}

std::size_t PairwiseMatchings::num_matchings() const {
    std::size_t n = 0;
    for (const auto& [key, block] : blocks_) {
        const auto [i, j] = key;
        if (i == j) continue;
        if (i > j && blocks_.count({j, i}) > 0) continue;  // mirror already counted
        n += block.entries.size();
    }
    return n;
}

bool PairwiseMatchings::operator==(const PairwiseMatchings& other) const {
    if (!(structure_ == other.structure_)) return false;
    for (int i = 0; i < structure_.k; ++i) {
        for (int j = i; j < structure_.k; ++j) {
            if (!(block(i, j) == other.block(i, j))) return false;
        }
    }
    return true;
}

std::optional<std::string> UniverseAssignment::check() const {
    if (static_cast<int>(column_of.size()) != structure.k) {
        return "assignment covers " + std::to_string(column_of.size()) + " objects, structure has " +
               std::to_string(structure.k);
    }
    for (int i = 0; i < structure.k; ++i) {
        if (static_cast<int>(column_of[i].size()) != structure.sizes[i]) {
            return "object " + std::to_string(i + 1) + " assigns " +
                   std::to_string(column_of[i].size()) + " rows, expected " +
                   std::to_string(structure.sizes[i]);
        }
        std::vector<bool> used(d, false);
        for (int r = 0; r < structure.sizes[i]; ++r) {
            const int c = column_of[i][r];
            if (c < 0 || c >= d) {
                return "object " + std::to_string(i + 1) + ", row " + std::to_string(r + 1) +
                       " assigned outside the universe";
            }
            if (used[c]) {
                return "object " + std::to_string(i + 1) + " uses universe column " +
                       std::to_string(c + 1) + " twice";
            }
            used[c] = true;
        }
    }
    return std::nullopt;
}

namespace {

std::string block_name(int i, int j) {
    return "block (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

}  // namespace

ValidationResult validate_pairwise(const PairwiseMatchings& w) {
    const auto& s = w.structure();
    auto reject = [](ValidationResult::Kind kind, std::string message) {
        ValidationResult r;
        r.ok = false;
        r.kind = kind;
        r.message = std::move(message);
        return r;
    };

    for (const auto& [key, block] : w.stored()) {
        const auto [i, j] = key;
        if (block.rows != s.sizes[i] || block.cols != s.sizes[j]) {
            return reject(ValidationResult::Kind::Structural,
                          block_name(i, j) + " is " + std::to_string(block.rows) + "x" +
                              std::to_string(block.cols) + ", structure requires " +
                              std::to_string(s.sizes[i]) + "x" + std::to_string(s.sizes[j]));
        }
        for (const auto& [r, c] : block.entries) {
            if (r < 0 || r >= block.rows || c < 0 || c >= block.cols) {
                return reject(ValidationResult::Kind::Structural,
                              "entry (" + std::to_string(r + 1) + ", " + std::to_string(c + 1) +
                                  ") outside " + block_name(i, j));
            }
        }
    }

    for (const auto& [key, block] : w.stored()) {
        const auto [i, j] = key;
        std::vector<bool> row_used(block.rows, false), col_used(block.cols, false);
        for (const auto& [r, c] : block.entries) {
            if (row_used[r]) {
                return reject(ValidationResult::Kind::Semantic,
                              "row-sum violation at " + block_name(i, j) + ", row " +
                                  std::to_string(r + 1));
            }
            if (col_used[c]) {
                return reject(ValidationResult::Kind::Semantic,
                              "column-sum violation at " + block_name(i, j) + ", column " +
                                  std::to_string(c + 1));
            }
            row_used[r] = true;
            col_used[c] = true;
        }
        if (i == j && !(block == PartialPermutation::identity(s.sizes[i]))) {
            return reject(ValidationResult::Kind::Semantic,
                          "diagonal " + block_name(i, j) + " is not the identity");
        }
        if (i < j && w.has_stored(j, i)) {
            if (!(w.stored().at({j, i}).transposed() == block)) {
                return reject(ValidationResult::Kind::Semantic,
                              "symmetry violation between " + block_name(i, j) + " and " +
                                  block_name(j, i));
            }
        }
    }

    return ValidationResult{};
}

PairwiseMatchings expand_consistent(const UniverseAssignment& u) {
    if (const auto issue = u.check()) {
        fail(ErrorKind::Validation, "invalid universe assignment: " + *issue);
    }
    const auto& s = u.structure;

    // Per object: local row owning each universe column, or -1.
    std::vector<std::vector<int>> row_of_column(s.k, std::vector<int>(u.d, -1));
    for (int i = 0; i < s.k; ++i) {
        for (int r = 0; r < s.sizes[i]; ++r) row_of_column[i][u.column_of[i][r]] = r;
    }

    PairwiseMatchings w(s);
    for (int i = 0; i < s.k; ++i) {
        for (int j = i + 1; j < s.k; ++j) {
            PartialPermutation block = PartialPermutation::empty(s.sizes[i], s.sizes[j]);
            for (int r = 0; r < s.sizes[i]; ++r) {
                const int partner = row_of_column[j][u.column_of[i][r]];
                if (partner >= 0) block.entries.emplace_back(r, partner);
            }
            if (!block.entries.empty()) w.set_block(i, j, std::move(block));
        }
    }
    return w;
}

bool is_cycle_consistent(const PairwiseMatchings& w) {
    const auto& s = w.structure();
    std::vector<int> parent(s.m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::size_t edges = 0;
    for (const auto& [key, block] : w.stored()) {
        const auto [i, j] = key;
        if (i == j) continue;
        if (i > j && w.has_stored(j, i)) continue;
        for (const auto& [r, c] : block.entries) {
            const int a = s.offsets[i] + r;
            const int b = s.offsets[j] + c;
            const int ra = find(a), rb = find(b);
            if (ra != rb) parent[ra] = rb;
        }
        edges += block.entries.size();
    }

    std::vector<std::size_t> component_size(s.m, 0);
    for (int x = 0; x < s.m; ++x) component_size[find(x)]++;

    // A component of n features is a clique exactly when it carries n(n-1)/2
    // matchings; matchings never join two features of the same object, so a
    // clique also touches each object at most once.
    std::size_t required = 0;
    for (int x = 0; x < s.m; ++x) {
        const std::size_t n = component_size[x];
        required += n * (n - 1) / 2;
    }
    return edges == required;
}

}  // namespace permsync
