#pragma once

#include <string>

#include "core/matchings.hpp"

namespace permsync {

/// Text format for pairwise matchings. A file holds the header line `PMX 1`,
/// a line `k m_1 ... m_k` with the block sizes, and one line `i j p q` per
/// matching with 1-based object indices i < j and feature indices p, q,
/// meaning feature p of object i matches feature q of object j. Diagonal
/// identity blocks are implicit and never written.
///
/// parse_pmx checks the format (header, counts, ranges, i < j) and reports
/// offending line numbers; whether the entries form valid partial
/// permutations is a semantic question left to validate_pairwise.
PairwiseMatchings parse_pmx(const std::string& text);

/// Canonical serialisation: blocks in ascending (i, j) order, entries sorted
/// by row then column. parse_pmx(serialise_pmx(w)) == w, and serialising the
/// parse reproduces a canonical file byte for byte.
std::string serialise_pmx(const PairwiseMatchings& w);

PairwiseMatchings load_pmx(const std::string& path);
void save_pmx(const PairwiseMatchings& w, const std::string& path);

}  // namespace permsync
