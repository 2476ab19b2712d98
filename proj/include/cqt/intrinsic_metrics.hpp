#pragma once

// Metrics that need no ground truth: modularity Q, modularity density Qds and
// six per-community connectivity measures. Everything is derived from
// per-community edge statistics, which only need a community's members and
// their one-hop neighbourhood.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cqt/graph.hpp"

namespace cqt {

struct NeighborEdges {
    CommunityId community;
    std::uint64_t edges;  // |E_ci,cj|
    std::uint64_t size;   // |c_j|

    friend bool operator==(const NeighborEdges &, const NeighborEdges &) = default;
};

struct CommunityStats {
    CommunityId id = 0;
    std::uint64_t size = 0;
    std::uint64_t inEdges = 0;
    std::uint64_t outEdges = 0;
    /// Sorted by community id; excludes edges to unassigned nodes.
    std::vector<NeighborEdges> neighborEdges;
    /// Boundary edges whose other end belongs to no community.
    std::uint64_t unassignedEdges = 0;

    friend bool operator==(const CommunityStats &, const CommunityStats &) = default;
};

/// Stats for each community of `communities`. `labels` maps every node of
/// `net` to its community, and `sizes` gives every community's size. `net`
/// may be a local subgraph holding the communities plus their neighbours.
inline std::vector<CommunityStats> community_stats(const Network &net, const CommunityBlock &communities,
                                                   const NodeCommunityMap &labels,
                                                   std::span<const std::size_t> sizes) {
    std::vector<CommunityStats> out;
    out.reserve(communities.size());
    std::vector<std::uint64_t> cross(sizes.size(), 0);
    std::vector<CommunityId> touched;
    for (std::size_t i = 0; i < communities.size(); ++i) {
        CommunityStats s;
        s.id = communities.ids[i];
        auto members = communities.members_of(i);
        s.size = members.size();
        std::uint64_t internalEnds = 0;
        touched.clear();
        for (NodeId v : members) {
            if (v >= net.node_count()) throw RangeError("community node " + std::to_string(v) + " not in network");
            for (NodeId u : net.neighbors(v)) {
                const CommunityId cu = labels[u];
                if (cu == s.id) {
                    ++internalEnds;
                } else {
                    ++s.outEdges;
                    if (cu == kUnassigned) {
                        ++s.unassignedEdges;
                    } else if (cross[cu]++ == 0) {
                        touched.push_back(cu);
                    }
                }
            }
        }
        s.inEdges = internalEnds / 2;
        std::sort(touched.begin(), touched.end());
        s.neighborEdges.reserve(touched.size());
        for (CommunityId c : touched) {
            s.neighborEdges.push_back({c, cross[c], sizes[c]});
            cross[c] = 0;
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<CommunityStats> community_stats(const Network &net, const Partition &p) {
    if (p.universe_size() != net.node_count())
        throw std::invalid_argument("partition universe does not match network size");
    auto sizes = p.sizes();
    return community_stats(net, shard(p, 1, 0).block, to_node_map(p), sizes);
}

/// Internal density 2|E_in| / (|c|(|c|-1)); 0 for a singleton.
inline double intra_density(const CommunityStats &s) {
    if (s.size < 2) return 0.0;
    return 2.0 * static_cast<double>(s.inEdges) / (static_cast<double>(s.size) * static_cast<double>(s.size - 1));
}

inline double modularity_contribution(const CommunityStats &s, std::uint64_t totalEdges) {
    const double m = static_cast<double>(totalEdges);
    const double share = (2.0 * static_cast<double>(s.inEdges) + static_cast<double>(s.outEdges)) / (2.0 * m);
    return static_cast<double>(s.inEdges) / m - share * share;
}

inline double modularity_density_contribution(const CommunityStats &s, std::uint64_t totalEdges) {
    const double m = static_cast<double>(totalEdges);
    const double d = intra_density(s);
    const double share = (2.0 * static_cast<double>(s.inEdges) + static_cast<double>(s.outEdges)) / (2.0 * m) * d;
    double penalty = 0.0;
    for (const auto &nb : s.neighborEdges) {
        const double e = static_cast<double>(nb.edges);
        penalty += e / (2.0 * m) * (e / (static_cast<double>(s.size) * static_cast<double>(nb.size)));
    }
    return static_cast<double>(s.inEdges) / m * d - share * share - penalty;
}

inline void require_edges(std::uint64_t totalEdges) {
    if (totalEdges == 0) throw std::invalid_argument("network has no edges");
}

inline double modularity(std::span<const CommunityStats> stats, std::uint64_t totalEdges) {
    require_edges(totalEdges);
    double q = 0.0;
    for (const auto &s : stats) q += modularity_contribution(s, totalEdges);
    return q;
}

inline double modularity_density(std::span<const CommunityStats> stats, std::uint64_t totalEdges) {
    require_edges(totalEdges);
    double q = 0.0;
    for (const auto &s : stats) q += modularity_density_contribution(s, totalEdges);
    return q;
}

struct CommunityMeasures {
    CommunityId id = 0;
    std::uint64_t size = 0;
    std::uint64_t intraEdges = 0;
    double intraDensity = 0.0;
    double contraction = 0.0;
    std::uint64_t interEdges = 0;
    double expansion = 0.0;
    double conductance = 0.0;
    /// Community's terms in Q and Qds.
    double modularity = 0.0;
    double modularityDensity = 0.0;
    /// No incident edges at all; conductance reported as 0.
    bool isolated = false;
};

inline CommunityMeasures community_measures(const CommunityStats &s, std::uint64_t totalEdges) {
    CommunityMeasures r;
    r.id = s.id;
    r.size = s.size;
    r.intraEdges = s.inEdges;
    r.intraDensity = intra_density(s);
    r.contraction = s.size ? 2.0 * static_cast<double>(s.inEdges) / static_cast<double>(s.size) : 0.0;
    r.interEdges = s.outEdges;
    r.expansion = s.size ? static_cast<double>(s.outEdges) / static_cast<double>(s.size) : 0.0;
    const std::uint64_t volume = 2 * s.inEdges + s.outEdges;
    r.isolated = volume == 0;
    r.conductance = r.isolated ? 0.0 : static_cast<double>(s.outEdges) / static_cast<double>(volume);
    if (totalEdges > 0) {
        r.modularity = modularity_contribution(s, totalEdges);
        r.modularityDensity = modularity_density_contribution(s, totalEdges);
    }
    return r;
}

/// Network-level summary. The six measures are aggregated as unweighted
/// means over communities; per-community rows keep the full detail.
struct IntrinsicReport {
    std::vector<CommunityMeasures> rows;  // ascending community id
    double modularity = 0.0;
    double modularityDensity = 0.0;
    std::uint64_t edgeCount = 0;
    std::size_t communityCount = 0;
    std::size_t unassignedNodes = 0;
    std::size_t isolatedCommunities = 0;
    std::size_t singletonCommunities = 0;

    struct Means {
        double intraEdges = 0, intraDensity = 0, contraction = 0, interEdges = 0, expansion = 0, conductance = 0;
    } means;
};

/// Fills the means and convention counters from `rows`; Q and Qds are left as given.
inline void summarize_rows(IntrinsicReport &r) {
    r.communityCount = r.rows.size();
    r.means = {};
    r.isolatedCommunities = 0;
    r.singletonCommunities = 0;
    for (const auto &row : r.rows) {
        r.means.intraEdges += static_cast<double>(row.intraEdges);
        r.means.intraDensity += row.intraDensity;
        r.means.contraction += row.contraction;
        r.means.interEdges += static_cast<double>(row.interEdges);
        r.means.expansion += row.expansion;
        r.means.conductance += row.conductance;
        r.isolatedCommunities += row.isolated;
        r.singletonCommunities += row.size == 1;
    }
    if (!r.rows.empty()) {
        const double k = static_cast<double>(r.rows.size());
        r.means.intraEdges /= k;
        r.means.intraDensity /= k;
        r.means.contraction /= k;
        r.means.interEdges /= k;
        r.means.expansion /= k;
        r.means.conductance /= k;
    }
}

inline IntrinsicReport intrinsic_report(std::span<const CommunityStats> stats, std::uint64_t totalEdges) {
    require_edges(totalEdges);
    IntrinsicReport r;
    r.edgeCount = totalEdges;
    r.rows.reserve(stats.size());
    for (const auto &s : stats) r.rows.push_back(community_measures(s, totalEdges));
    r.modularity = modularity(stats, totalEdges);
    r.modularityDensity = modularity_density(stats, totalEdges);
    summarize_rows(r);
    return r;
}

} // namespace cqt
