#include "core/pmx.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "core/errors.hpp"

namespace permsync {

namespace {

[[noreturn]] void bad_line(int line, const std::string& why) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + why);
}

std::vector<long long> parse_integers(int line, const std::string& text) {
    std::istringstream in(text);
    std::vector<long long> values;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoll(token, &used));
            if (used != token.size()) bad_line(line, "'" + token + "' is not an integer");
        } catch (const Error&) {
            throw;
        } catch (...) {
            bad_line(line, "'" + token + "' is not an integer");
        }
    }
    return values;
}

}  // namespace

PairwiseMatchings parse_pmx(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) fail(ErrorKind::Parse, "empty input, expected a PMX header");
    ++line_no;
    {
        std::istringstream header(line);
        std::string magic;
        int version = 0;
        if (!(header >> magic >> version) || magic != "PMX") {
            bad_line(line_no, "expected the header 'PMX 1'");
        }
        if (version != 1) bad_line(line_no, "unsupported PMX version " + std::to_string(version));
        std::string extra;
        if (header >> extra) bad_line(line_no, "unexpected token '" + extra + "' after the header");
    }

    if (!std::getline(in, line)) fail(ErrorKind::Parse, "missing block size line");
    ++line_no;
    const std::vector<long long> counts = parse_integers(line_no, line);
    if (counts.empty()) bad_line(line_no, "expected 'k m_1 ... m_k'");
    const long long k = counts[0];
    if (k < 2) bad_line(line_no, "need at least 2 objects, got " + std::to_string(k));
    if (static_cast<long long>(counts.size()) != k + 1) {
        bad_line(line_no, "expected " + std::to_string(k) + " block sizes, got " +
                              std::to_string(counts.size() - 1));
    }
    std::vector<int> sizes;
    for (long long i = 1; i <= k; ++i) {
        if (counts[i] < 0) bad_line(line_no, "block sizes must be non-negative");
        sizes.push_back(static_cast<int>(counts[i]));
    }

    PairwiseMatchings w(BlockStructure::from_sizes(sizes));
    std::map<std::pair<int, int>, PartialPermutation> blocks;
    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<long long> fields = parse_integers(line_no, line);
        if (fields.empty()) continue;
        if (fields.size() != 4) {
            bad_line(line_no, "expected 'i j p q', got " + std::to_string(fields.size()) +
                                  " fields");
        }
        const long long i = fields[0], j = fields[1], p = fields[2], q = fields[3];
        if (i < 1 || i > k || j < 1 || j > k) {
            bad_line(line_no, "object index out of range 1.." + std::to_string(k));
        }
        if (i >= j) bad_line(line_no, "matchings must be listed for i < j");
        if (p < 1 || p > sizes[i - 1]) {
            bad_line(line_no, "feature " + std::to_string(p) + " out of range for object " +
                                  std::to_string(i) + " (" + std::to_string(sizes[i - 1]) +
                                  " features)");
        }
        if (q < 1 || q > sizes[j - 1]) {
            bad_line(line_no, "feature " + std::to_string(q) + " out of range for object " +
                                  std::to_string(j) + " (" + std::to_string(sizes[j - 1]) +
                                  " features)");
        }
        auto& block = blocks[{static_cast<int>(i - 1), static_cast<int>(j - 1)}];
        block.entries.emplace_back(static_cast<int>(p - 1), static_cast<int>(q - 1));
    }

    for (auto& [key, block] : blocks) {
        block.rows = sizes[key.first];
        block.cols = sizes[key.second];
        w.set_block(key.first, key.second, std::move(block));
    }
    return w;
}

std::string serialise_pmx(const PairwiseMatchings& w) {
    const BlockStructure& s = w.structure();
    std::string out = "PMX 1\n" + std::to_string(s.k);
    for (const int size : s.sizes) out += " " + std::to_string(size);
    out += "\n";
    for (int i = 0; i < s.k; ++i) {
        for (int j = i + 1; j < s.k; ++j) {
            for (const auto& [p, q] : w.block(i, j).entries) {
                out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
                       std::to_string(p + 1) + " " + std::to_string(q + 1) + "\n";
            }
        }
    }
    return out;
}

PairwiseMatchings load_pmx(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(ErrorKind::Io, "failed reading '" + path + "'");
    return parse_pmx(buffer.str());
}

void save_pmx(const PairwiseMatchings& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << serialise_pmx(w);
    out.flush();
    if (!out) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace permsync
