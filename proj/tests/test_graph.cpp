#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cqt/graph.hpp"
#include "support/oracles.hpp"

using namespace cqt;

TEST(NodeIndex, RanksSparseIds) {
    auto idx = NodeIndex::from_ids({40, 7, 7, 1000, 3});
    EXPECT_EQ(idx.size(), 4u);
    EXPECT_EQ(idx.find(3), 0u);
    EXPECT_EQ(idx.find(7), 1u);
    EXPECT_EQ(idx.find(1000), 3u);
    EXPECT_FALSE(idx.find(8).has_value());
    EXPECT_EQ(idx.external(2), 40u);
}

TEST(NodeIndex, IdentityWhenIdsAreDense) {
    auto idx = NodeIndex::from_ids({2, 0, 1});
    EXPECT_EQ(idx.find(2), 2u);
    EXPECT_FALSE(idx.find(3).has_value());
}

TEST(Network, DropsLoopsAndDuplicates) {
    EdgeCleanup cleanup;
    auto n = Network::from_edges(4, {{0, 1}, {1, 0}, {2, 2}, {1, 2}, {0, 1}, {3, 2}}, &cleanup);
    EXPECT_EQ(n.edge_count(), 3u);
    EXPECT_EQ(cleanup.duplicates, 2u);
    EXPECT_EQ(cleanup.selfLoops, 1u);
    EXPECT_TRUE(n.is_valid());
    EXPECT_EQ(n.degree(1), 2u);
    auto adj = n.neighbors(2);
    EXPECT_EQ(std::vector<NodeId>(adj.begin(), adj.end()), (std::vector<NodeId>{1, 3}));
}

TEST(Network, RejectsEndpointOutsideRange) {
    EXPECT_THROW(Network::from_edges(2, {{0, 2}}), RangeError);
}

TEST(Network, RandomGraphsAreValid) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto n = oracle::random_graph(rng, 1 + t * 3, 0.3);
        EXPECT_TRUE(n.is_valid());
        std::uint64_t degrees = 0;
        for (NodeId v = 0; v < n.node_count(); ++v) degrees += n.degree(v);
        EXPECT_EQ(degrees, 2 * n.edge_count());
    }
}

TEST(Partition, Validation) {
    EXPECT_THROW(Partition({{0, 1}, {}}, 3), std::invalid_argument);
    EXPECT_THROW(Partition({{0, 1}, {1, 2}}, 3), OverlapError);
    EXPECT_THROW(Partition({{0, 5}}, 3), RangeError);
    try {
        Partition({{0, 1}, {2, 1}}, 3);
        FAIL();
    } catch (const OverlapError &e) {
        EXPECT_EQ(e.node(), 1u);
    }
}

TEST(Partition, Accessors) {
    Partition p({{4, 0}, {2}}, 6);
    EXPECT_EQ(p.community_count(), 2u);
    EXPECT_EQ(p.covered_count(), 3u);
    EXPECT_FALSE(p.covers_universe());
    EXPECT_EQ(p.community_size(0), 2u);
    EXPECT_EQ(p.sizes(), (std::vector<std::size_t>{2, 1}));
}

TEST(Partition, NodeMapRoundTrip) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto labels = oracle::random_labels(rng, 1 + rng() % 200, 1 + rng() % 20, 0.1);
        auto p = oracle::partition_of(labels);
        auto map = to_node_map(p);
        for (NodeId v = 0; v < labels.size(); ++v) EXPECT_EQ(map.assigned(v), labels[v] >= 0);
        // community ids are ascending first-label order in both, so the round trip is exact
        EXPECT_EQ(from_node_map(map), p);
    }
}

TEST(Partition, CompleteWithSingletons) {
    Partition p({{1, 3}}, 5);
    auto c = complete_with_singletons(p);
    EXPECT_TRUE(c.covers_universe());
    EXPECT_EQ(c.community_count(), 4u);
    auto m = to_node_map(c);
    EXPECT_EQ(m[1], m[3]);
    EXPECT_NE(m[0], m[2]);
}

TEST(Shard, RejectsBadWorker) {
    Partition p({{0}}, 1);
    EXPECT_THROW(shard(p, 0, 0), std::invalid_argument);
    EXPECT_THROW(shard(p, 2, 2), std::invalid_argument);
}

TEST(Shard, ModRuleCoversEveryCommunityOnceAndBalances) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 40; ++t) {
        auto p = oracle::partition_of(oracle::random_labels(rng, 1 + rng() % 300, 1 + rng() % 40));
        const std::size_t w = 1 + rng() % 9;
        std::multiset<CommunityId> seen;
        std::size_t lo = SIZE_MAX, hi = 0, members = 0;
        for (std::size_t id = 0; id < w; ++id) {
            auto s = shard(p, w, id);
            for (auto c : s.block.ids) {
                EXPECT_EQ(c % w, id);
                seen.insert(c);
            }
            for (std::size_t i = 0; i < s.block.size(); ++i) {
                auto m = s.block.members_of(i);
                auto expect = p.members(s.block.ids[i]);
                EXPECT_TRUE(std::equal(m.begin(), m.end(), expect.begin(), expect.end()));
            }
            members += s.block.member_count();
            lo = std::min(lo, s.block.size());
            hi = std::max(hi, s.block.size());
        }
        EXPECT_EQ(seen.size(), p.community_count());
        EXPECT_EQ(std::set<CommunityId>(seen.begin(), seen.end()).size(), p.community_count());
        EXPECT_EQ(members, p.covered_count());
        EXPECT_LE(hi - lo, 1u);
    }
}

TEST(LocalSubgraph, KeepsEveryEdgeTouchingTheShard) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 10; ++t) {
        auto net = oracle::random_graph(rng, 40, 0.15);
        auto p = oracle::partition_of(oracle::random_labels(rng, 40, 6));
        for (std::size_t id = 0; id < 3; ++id) {
            auto s = shard(p, 3, id);
            auto local = local_subgraph(net, s);
            EXPECT_TRUE(local.is_valid());
            for (NodeId v : s.block.members) {
                auto a = net.neighbors(v), b = local.neighbors(v);
                EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
            }
        }
    }
}
