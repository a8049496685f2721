#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace permsync {

/// Deterministic random source. All sampling algorithms are spelled out here
/// instead of using std::uniform_*_distribution, whose output is
/// implementation defined; this keeps seeded runs reproducible across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Unbiased integer in [0, n), n > 0, by rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (polar form avoided to keep the
    /// consumption of the underlying stream fixed per call).
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    /// Uniformly random permutation of {0, ..., n-1}.
    std::vector<int> permutation(int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

    /// `count` distinct values from {0, ..., n-1}, in random order.
    std::vector<int> sample_without_replacement(int n, int count) {
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i) {
            const int j = i + below_int(n - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

    /// Derives an independent stream seed from a master seed and two indices,
    /// for experiments that run many seeded trials.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        auto mix = [](std::uint64_t x) {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        };
        return mix(seed ^ mix(a + 0x100000001b3ULL * b));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace permsync
