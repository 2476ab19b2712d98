#pragma once

// Rand, adjusted Rand and Jaccard indices from node-pair tallies.
//
// Nodes missing from a partition behave as singletons of that partition.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cqt/contingency.hpp"

namespace cqt {

/// Node-pair tallies: a11 same/same, a10 same in ground only, a01 same in
/// detected only, a00 different in both.
struct PairCounts {
    std::uint64_t a11 = 0;
    std::uint64_t a10 = 0;
    std::uint64_t a01 = 0;
    std::uint64_t a00 = 0;

    std::uint64_t total() const noexcept { return a11 + a10 + a01 + a00; }

    PairCounts &operator+=(const PairCounts &o) noexcept {
        a11 += o.a11;
        a10 += o.a10;
        a01 += o.a01;
        a00 += o.a00;
        return *this;
    }

    friend bool operator==(const PairCounts &, const PairCounts &) = default;
};

inline std::uint64_t choose2(std::uint64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

namespace detail {

/// Label array with kUnassigned replaced by a label no other node carries.
inline std::vector<std::uint32_t> singleton_labels(const NodeCommunityMap &m) {
    std::uint64_t next = 0;
    for (auto c : m.labels())
        if (c != kUnassigned) next = std::max<std::uint64_t>(next, std::uint64_t{c} + 1);
    std::vector<std::uint32_t> out(m.universe_size());
    for (NodeId v = 0; v < out.size(); ++v) {
        if (m[v] != kUnassigned) {
            out[v] = m[v];
        } else {
            if (next >= kUnassigned) throw RangeError("too many labels for 32-bit community ids");
            out[v] = static_cast<std::uint32_t>(next++);
        }
    }
    return out;
}

/// Tallies pairs (i, j), i < j, for rows i = first, first + step, ...
inline PairCounts count_pair_rows(std::span<const std::uint32_t> g, std::span<const std::uint32_t> d,
                                  std::size_t first, std::size_t step) {
    const std::size_t n = g.size();
    PairCounts out;
    std::uint64_t pairs = 0;
    for (std::size_t i = first; i < n; i += step) {
        const std::uint32_t gi = g[i];
        const std::uint32_t di = d[i];
        std::uint64_t s11 = 0, sg = 0, sd = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t eg = g[j] == gi;
            const std::uint64_t ed = d[j] == di;
            s11 += eg & ed;
            sg += eg;
            sd += ed;
        }
        out.a11 += s11;
        out.a10 += sg - s11;
        out.a01 += sd - s11;
        pairs += n - 1 - i;
    }
    out.a00 = pairs - out.a11 - out.a10 - out.a01;
    return out;
}

} // namespace detail

/// Enumerates every unordered node pair. Quadratic; this is the reference count.
inline PairCounts pair_counts_bruteforce(const NodeCommunityMap &ground, const NodeCommunityMap &detected) {
    if (ground.universe_size() != detected.universe_size())
        throw std::invalid_argument("maps are over different universes");
    auto g = detail::singleton_labels(ground);
    auto d = detail::singleton_labels(detected);
    return detail::count_pair_rows(g, d, 0, 1);
}

/// Same counts from overlap sizes: a11 = Σ C(n_ij,2), a11+a10 = Σ C(|c|,2),
/// a11+a01 = Σ C(|c'|,2), a00 the complement within C(|V|,2).
inline PairCounts pair_counts_fast(const ContingencyTable &t) {
    std::uint64_t same = 0, sameGround = 0, sameDetected = 0;
    for (const auto &cell : t.cells) same += choose2(cell.count);
    for (auto s : t.rowSizes) sameGround += choose2(s);
    for (auto s : t.colSizes) sameDetected += choose2(s);
    PairCounts p;
    p.a11 = same;
    p.a10 = sameGround - same;
    p.a01 = sameDetected - same;
    p.a00 = choose2(t.universe) - p.a11 - p.a10 - p.a01;
    return p;
}

inline double rand_index(const PairCounts &p) {
    if (p.total() == 0) throw DegenerateMetric("Rand index needs at least two nodes");
    return static_cast<double>(p.a11 + p.a00) / static_cast<double>(p.total());
}

namespace detail {
__extension__ using u128 = unsigned __int128;
}

/// The ARI denominator vanishes only when both partitions are all-singletons
/// or both are one block; those inputs agree on every pair and score 1.
inline double adjusted_rand_index(const PairCounts &p, bool *degenerate = nullptr) {
    const detail::u128 total = p.total();
    if (total == 0) throw DegenerateMetric("adjusted Rand index needs at least two nodes");
    const detail::u128 s1 = p.a11 + p.a10;
    const detail::u128 s2 = p.a11 + p.a01;
    // denominator == 0  <=>  (s1 + s2) * A == 2 * s1 * s2
    const bool zeroDenominator = (s1 + s2) * total == 2 * s1 * s2;
    if (degenerate) *degenerate = zeroDenominator;
    if (zeroDenominator) {
        if (p.a10 == 0 && p.a01 == 0) return 1.0;
        throw DegenerateMetric("adjusted Rand index denominator is zero");
    }
    const double a = static_cast<double>(p.total());
    const double m = static_cast<double>(p.a11 + p.a10) * static_cast<double>(p.a11 + p.a01) / a;
    const double num = static_cast<double>(p.a11) - m;
    const double den = 0.5 * (static_cast<double>(p.a11 + p.a10) + static_cast<double>(p.a11 + p.a01)) - m;
    return num / den;
}

/// No co-membership pairs on either side gives 0/0; reported as 1.
inline double jaccard_index(const PairCounts &p, bool *degenerate = nullptr) {
    const std::uint64_t den = p.a11 + p.a10 + p.a01;
    if (degenerate) *degenerate = den == 0;
    if (den == 0) return 1.0;
    return static_cast<double>(p.a11) / static_cast<double>(den);
}

struct PairIndices {
    double ri = 0.0;
    double ari = 0.0;
    double ji = 0.0;
    bool ariDegenerate = false;
    bool jiDegenerate = false;
};

inline PairIndices pair_indices(const PairCounts &p) {
    PairIndices out;
    out.ri = rand_index(p);
    out.ari = adjusted_rand_index(p, &out.ariDegenerate);
    out.ji = jaccard_index(p, &out.jiDegenerate);
    return out;
}

struct PairMetrics {
    PairCounts counts;
    PairIndices indices;
};

} // namespace cqt
