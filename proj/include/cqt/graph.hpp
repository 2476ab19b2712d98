#pragma once

// Core graph and partition types shared by every metric and backend.
//
// Nodes are addressed by dense ids in [0, universe). Files may use sparse
// external ids; NodeIndex owns that translation. All types here are
// immutable once built and may be read concurrently.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqt/errors.hpp"

namespace cqt {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

inline constexpr CommunityId kUnassigned = std::numeric_limits<CommunityId>::max();

/// Sorted external-id table; dense id of an external id is its rank.
class NodeIndex {
public:
    NodeIndex() = default;

    static NodeIndex from_ids(std::vector<std::uint64_t> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() > std::numeric_limits<NodeId>::max())
            throw RangeError("too many distinct node ids for 32-bit dense indexing");
        NodeIndex index;
        index.identity_ = ids.empty() || ids.back() == ids.size() - 1;
        index.external_ = std::move(ids);
        return index;
    }

    static NodeIndex identity(std::size_t n) {
        std::vector<std::uint64_t> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = i;
        return from_ids(std::move(ids));
    }

    std::size_t size() const noexcept { return external_.size(); }

    std::optional<NodeId> find(std::uint64_t external) const {
        if (identity_) {
            if (external < external_.size()) return static_cast<NodeId>(external);
            return std::nullopt;
        }
        auto it = std::lower_bound(external_.begin(), external_.end(), external);
        if (it == external_.end() || *it != external) return std::nullopt;
        return static_cast<NodeId>(it - external_.begin());
    }

    std::uint64_t external(NodeId node) const { return external_.at(node); }

private:
    std::vector<std::uint64_t> external_;
    bool identity_ = true;
};

/// Counts of input edges discarded while building a Network.
struct EdgeCleanup {
    std::size_t duplicates = 0;
    std::size_t selfLoops = 0;
};

/// Undirected, unweighted graph in CSR form with sorted adjacency lists.
class Network {
public:
    Network() = default;

    /// Builds a simple graph from an edge list. Self-loops and repeated edges
    /// (in either orientation) are dropped and tallied in `cleanup`.
    static Network from_edges(std::size_t nodeCount, std::vector<std::pair<NodeId, NodeId>> edges,
                              EdgeCleanup *cleanup = nullptr) {
        EdgeCleanup dropped;
        std::vector<std::uint64_t> keys;
        keys.reserve(edges.size());
        for (auto [u, v] : edges) {
            if (u >= nodeCount || v >= nodeCount)
                throw RangeError("edge endpoint outside node range");
            if (u == v) {
                ++dropped.selfLoops;
                continue;
            }
            if (u > v) std::swap(u, v);
            keys.push_back((std::uint64_t{u} << 32) | v);
        }
        edges.clear();
        edges.shrink_to_fit();
        std::sort(keys.begin(), keys.end());
        auto last = std::unique(keys.begin(), keys.end());
        dropped.duplicates = static_cast<std::size_t>(keys.end() - last);
        keys.erase(last, keys.end());

        Network net;
        net.nodes_ = nodeCount;
        net.edges_ = keys.size();
        net.offsets_.assign(nodeCount + 1, 0);
        for (auto key : keys) {
            ++net.offsets_[(key >> 32) + 1];
            ++net.offsets_[(key & 0xffffffffu) + 1];
        }
        for (std::size_t i = 0; i < nodeCount; ++i) net.offsets_[i + 1] += net.offsets_[i];
        net.targets_.resize(net.offsets_.back());
        std::vector<std::uint64_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
        // keys are sorted by (u, v), so both directions land in ascending order
        for (auto key : keys) {
            auto u = static_cast<NodeId>(key >> 32);
            auto v = static_cast<NodeId>(key & 0xffffffffu);
            net.targets_[cursor[u]++] = v;
        }
        for (auto key : keys) {
            auto u = static_cast<NodeId>(key >> 32);
            auto v = static_cast<NodeId>(key & 0xffffffffu);
            net.targets_[cursor[v]++] = u;
        }
        for (std::size_t i = 0; i < nodeCount; ++i)
            std::sort(net.targets_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i]),
                      net.targets_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i + 1]));
        if (cleanup) *cleanup = dropped;
        return net;
    }

    std::size_t node_count() const noexcept { return nodes_; }
    std::uint64_t edge_count() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId node) const {
        return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
    }

    std::size_t degree(NodeId node) const {
        return static_cast<std::size_t>(offsets_[node + 1] - offsets_[node]);
    }

    /// Checks symmetry, absence of self-loops and duplicates, and the edge count.
    bool is_valid() const {
        if (offsets_.size() != nodes_ + 1 && !(nodes_ == 0 && offsets_.empty())) return false;
        if (nodes_ == 0) return edges_ == 0;
        if (offsets_.back() != 2 * edges_) return false;
        for (NodeId u = 0; u < nodes_; ++u) {
            auto adj = neighbors(u);
            for (std::size_t i = 0; i < adj.size(); ++i) {
                if (adj[i] == u || adj[i] >= nodes_) return false;
                if (i > 0 && adj[i] <= adj[i - 1]) return false;
                auto back = neighbors(adj[i]);
                if (!std::binary_search(back.begin(), back.end(), u)) return false;
            }
        }
        return true;
    }

    friend bool operator==(const Network &, const Network &) = default;

private:
    std::size_t nodes_ = 0;
    std::uint64_t edges_ = 0;
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Communities with global ids, stored contiguously. Backing store for
/// partition shards and for ring payloads.
struct CommunityBlock {
    std::vector<CommunityId> ids;
    std::vector<std::uint64_t> offsets{0};
    std::vector<NodeId> members;

    std::size_t size() const noexcept { return ids.size(); }
    std::size_t member_count() const noexcept { return members.size(); }

    std::span<const NodeId> members_of(std::size_t i) const {
        return {members.data() + offsets[i], members.data() + offsets[i + 1]};
    }

    void append(CommunityId id, std::span<const NodeId> nodes) {
        ids.push_back(id);
        members.insert(members.end(), nodes.begin(), nodes.end());
        offsets.push_back(members.size());
    }

    friend bool operator==(const CommunityBlock &, const CommunityBlock &) = default;
};

/// Disjoint, non-empty communities over a node universe. Community k is the
/// k-th community given at construction.
class Partition {
public:
    Partition() = default;

    Partition(const std::vector<std::vector<NodeId>> &communities, std::size_t universe)
        : universe_(universe) {
        offsets_.reserve(communities.size() + 1);
        for (const auto &c : communities) {
            members_.insert(members_.end(), c.begin(), c.end());
            offsets_.push_back(members_.size());
        }
        validate();
    }

    std::size_t universe_size() const noexcept { return universe_; }
    std::size_t community_count() const noexcept { return offsets_.size() - 1; }
    std::size_t covered_count() const noexcept { return members_.size(); }
    bool covers_universe() const noexcept { return members_.size() == universe_; }

    std::span<const NodeId> members(CommunityId c) const {
        return {members_.data() + offsets_[c], members_.data() + offsets_[c + 1]};
    }

    std::size_t community_size(CommunityId c) const {
        return static_cast<std::size_t>(offsets_[c + 1] - offsets_[c]);
    }

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out(community_count());
        for (CommunityId c = 0; c < out.size(); ++c) out[c] = community_size(c);
        return out;
    }

    friend bool operator==(const Partition &, const Partition &) = default;

private:
    void validate() const {
        std::vector<bool> seen(universe_, false);
        for (CommunityId c = 0; c < community_count(); ++c) {
            if (community_size(c) == 0)
                throw std::invalid_argument("community " + std::to_string(c) + " is empty");
            for (NodeId v : members(c)) {
                if (v >= universe_)
                    throw RangeError("node " + std::to_string(v) + " outside universe of size " +
                                     std::to_string(universe_));
                if (seen[v]) throw OverlapError(v);
                seen[v] = true;
            }
        }
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<NodeId> members_;
};

/// Dense node -> community lookup; kUnassigned marks nodes outside every community.
class NodeCommunityMap {
public:
    NodeCommunityMap() = default;
    explicit NodeCommunityMap(std::vector<CommunityId> labels) : labels_(std::move(labels)) {}

    std::size_t universe_size() const noexcept { return labels_.size(); }
    CommunityId operator[](NodeId v) const { return labels_[v]; }
    bool assigned(NodeId v) const { return labels_[v] != kUnassigned; }
    std::span<const CommunityId> labels() const noexcept { return labels_; }

    friend bool operator==(const NodeCommunityMap &, const NodeCommunityMap &) = default;

private:
    std::vector<CommunityId> labels_;
};

inline NodeCommunityMap to_node_map(const Partition &p) {
    std::vector<CommunityId> labels(p.universe_size(), kUnassigned);
    for (CommunityId c = 0; c < p.community_count(); ++c)
        for (NodeId v : p.members(c)) labels[v] = c;
    return NodeCommunityMap(std::move(labels));
}

/// Inverse of to_node_map. Communities come out in ascending label order
/// with ascending members; unused labels are skipped.
inline Partition from_node_map(const NodeCommunityMap &m) {
    std::vector<std::vector<NodeId>> groups;
    for (NodeId v = 0; v < m.universe_size(); ++v) {
        CommunityId c = m[v];
        if (c == kUnassigned) continue;
        if (c >= groups.size()) groups.resize(std::size_t{c} + 1);
        groups[c].push_back(v);
    }
    std::erase_if(groups, [](const auto &g) { return g.empty(); });
    return Partition(groups, m.universe_size());
}

/// Returns p with every uncovered node appended as its own singleton community.
inline Partition complete_with_singletons(const Partition &p) {
    if (p.covers_universe()) return p;
    std::vector<std::vector<NodeId>> groups;
    groups.reserve(p.community_count() + p.universe_size() - p.covered_count());
    std::vector<bool> covered(p.universe_size(), false);
    for (CommunityId c = 0; c < p.community_count(); ++c) {
        auto m = p.members(c);
        groups.emplace_back(m.begin(), m.end());
        for (NodeId v : m) covered[v] = true;
    }
    for (NodeId v = 0; v < p.universe_size(); ++v)
        if (!covered[v]) groups.push_back({v});
    return Partition(groups, p.universe_size());
}

/// The communities of a partition owned by one worker under the
/// `id mod numWorkers == workerId` rule.
struct PartitionShard {
    std::size_t owner = 0;
    std::size_t numWorkers = 1;
    std::size_t universe = 0;
    CommunityBlock block;
};

inline PartitionShard shard(const Partition &p, std::size_t numWorkers, std::size_t workerId) {
    if (numWorkers == 0) throw std::invalid_argument("worker count must be positive");
    if (workerId >= numWorkers)
        throw std::invalid_argument("worker id " + std::to_string(workerId) + " out of range");
    PartitionShard s{workerId, numWorkers, p.universe_size(), {}};
    for (std::size_t c = workerId; c < p.community_count(); c += numWorkers)
        s.block.append(static_cast<CommunityId>(c), p.members(static_cast<CommunityId>(c)));
    return s;
}

/// Shard nodes plus their one-hop neighbours, keeping every edge incident to
/// a shard node. Node ids are preserved, so global maps stay valid.
inline Network local_subgraph(const Network &n, const PartitionShard &s) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<bool> inShard(n.node_count(), false);
    for (NodeId v : s.block.members) {
        if (v >= n.node_count()) throw RangeError("shard node " + std::to_string(v) + " not in network");
        inShard[v] = true;
    }
    for (NodeId v : s.block.members)
        for (NodeId u : n.neighbors(v))
            if (!inShard[u] || v < u) edges.emplace_back(v, u);
    return Network::from_edges(n.node_count(), std::move(edges));
}

} // namespace cqt
