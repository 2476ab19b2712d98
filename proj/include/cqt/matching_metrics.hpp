#pragma once

// F-measure and normalized Van Dongen distance from best-overlap maxima.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "cqt/contingency.hpp"

namespace cqt {

/// Per-community best-match values, indexed by global community id.
struct MatchMaxima {
    std::vector<double> maxNormed;     // ground: max 2|c∩c'|/(|c|+|c'|)
    std::vector<std::uint64_t> maxT;   // ground: max |c∩c'|
    std::vector<std::uint64_t> maxD;   // detected: max |c'∩c|

    static MatchMaxima zeros(std::size_t groundCount, std::size_t detectedCount) {
        return {std::vector<double>(groundCount, 0.0), std::vector<std::uint64_t>(groundCount, 0),
                std::vector<std::uint64_t>(detectedCount, 0)};
    }

    MatchMaxima &merge(const MatchMaxima &o) {
        for (std::size_t i = 0; i < maxNormed.size(); ++i) {
            maxNormed[i] = std::max(maxNormed[i], o.maxNormed[i]);
            maxT[i] = std::max(maxT[i], o.maxT[i]);
        }
        for (std::size_t i = 0; i < maxD.size(); ++i) maxD[i] = std::max(maxD[i], o.maxD[i]);
        return *this;
    }

    friend bool operator==(const MatchMaxima &, const MatchMaxima &) = default;
};

/// Raises maxNormed/maxT of the ground communities in `ground` using the detected communities in `detected`.
inline void update_ground_maxima(MatchMaxima &m, OverlapScanner &scanner, const CommunityBlock &ground,
                                 const CommunityBlock &detected) {
    for_each_overlap(scanner, ground, detected, [&](std::size_t gi, std::size_t di, std::uint64_t n) {
        const auto g = ground.ids[gi];
        const auto gs = ground.members_of(gi).size();
        const auto ds = detected.members_of(di).size();
        const double normed = 2.0 * static_cast<double>(n) / static_cast<double>(gs + ds);
        m.maxNormed[g] = std::max(m.maxNormed[g], normed);
        m.maxT[g] = std::max(m.maxT[g], n);
    });
}

/// Raises maxD of the detected communities in `detected` using the ground communities in `ground`.
inline void update_detected_maxima(MatchMaxima &m, OverlapScanner &scanner, const CommunityBlock &detected,
                                   const CommunityBlock &ground) {
    for_each_overlap(scanner, detected, ground, [&](std::size_t di, std::size_t, std::uint64_t n) {
        const auto d = detected.ids[di];
        m.maxD[d] = std::max(m.maxD[d], n);
    });
}

/// Both sides at once. Re-applying with the same shards changes nothing.
inline void update_maxima(MatchMaxima &m, const PartitionShard &groundShard, const PartitionShard &detectedShard) {
    OverlapScanner scanner(groundShard.universe);
    for_each_overlap(scanner, groundShard.block, detectedShard.block,
                     [&](std::size_t gi, std::size_t di, std::uint64_t n) {
                         const auto g = groundShard.block.ids[gi];
                         const auto d = detectedShard.block.ids[di];
                         const auto gs = groundShard.block.members_of(gi).size();
                         const auto ds = detectedShard.block.members_of(di).size();
                         const double normed = 2.0 * static_cast<double>(n) / static_cast<double>(gs + ds);
                         m.maxNormed[g] = std::max(m.maxNormed[g], normed);
                         m.maxT[g] = std::max(m.maxT[g], n);
                         m.maxD[d] = std::max(m.maxD[d], n);
                     });
}

inline MatchMaxima match_maxima(const Partition &ground, const Partition &detected) {
    auto m = MatchMaxima::zeros(ground.community_count(), detected.community_count());
    update_maxima(m, shard(ground, 1, 0), shard(detected, 1, 0));
    return m;
}

inline double f_measure(const MatchMaxima &m, std::span<const std::size_t> groundSizes, std::size_t universe) {
    if (universe == 0) throw std::invalid_argument("universe size is zero");
    double sum = 0.0;
    for (std::size_t c = 0; c < groundSizes.size(); ++c) sum += static_cast<double>(groundSizes[c]) * m.maxNormed[c];
    return sum / static_cast<double>(universe);
}

inline double nvd(const MatchMaxima &m, std::size_t universe) {
    if (universe == 0) throw std::invalid_argument("universe size is zero");
    std::uint64_t matched = 0;
    for (auto t : m.maxT) matched += t;
    for (auto d : m.maxD) matched += d;
    return 1.0 - static_cast<double>(matched) / (2.0 * static_cast<double>(universe));
}

struct MatchingMetrics {
    double fMeasure = 0.0;
    double nvd = 0.0;
};

} // namespace cqt
