#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cqt/matching_metrics.hpp"
#include "support/oracles.hpp"

using namespace cqt;

namespace {

MatchingMetrics matching(const Partition &g, const Partition &d) {
    auto m = match_maxima(g, d);
    auto sizes = g.sizes();
    return {f_measure(m, sizes, g.universe_size()), nvd(m, g.universe_size())};
}

/// Same partition with community ids shuffled.
Partition relabeled(const Partition &p, std::mt19937_64 &rng) {
    std::vector<std::vector<NodeId>> groups;
    for (CommunityId c = 0; c < p.community_count(); ++c) {
        auto m = p.members(c);
        groups.emplace_back(m.begin(), m.end());
    }
    std::shuffle(groups.begin(), groups.end(), rng);
    return Partition(groups, p.universe_size());
}

} // namespace

TEST(Matching, SixNodeFixture) {
    auto g = oracle::partition_of({0, 0, 0, 1, 1, 1});
    auto d = oracle::partition_of({0, 0, 1, 1, 1, 1});
    auto m = match_maxima(g, d);
    EXPECT_EQ(m.maxT, (std::vector<std::uint64_t>{2, 3}));
    EXPECT_EQ(m.maxD, (std::vector<std::uint64_t>{2, 3}));
    auto r = matching(g, d);
    EXPECT_NEAR(r.fMeasure, 0.828571, 1e-6);
    EXPECT_NEAR(r.nvd, 0.166667, 1e-6);
}

TEST(Matching, MatchesOracleOnRandomPartitions) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + rng() % 300;
        auto g = oracle::random_labels(rng, n, 1 + rng() % 25);
        auto d = oracle::random_labels(rng, n, 1 + rng() % 25);
        auto r = matching(oracle::partition_of(g), oracle::partition_of(d));
        EXPECT_NEAR(r.fMeasure, oracle::f_measure(g, d), 1e-12);
        EXPECT_NEAR(r.nvd, oracle::nvd(g, d), 1e-12);
    }
}

TEST(Matching, IdentityAndBounds) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + rng() % 300;
        auto g = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 25));
        auto d = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 25));
        auto self = matching(g, g);
        EXPECT_NEAR(self.fMeasure, 1.0, 1e-12);
        EXPECT_NEAR(self.nvd, 0.0, 1e-12);
        auto r = matching(g, d);
        EXPECT_GE(r.fMeasure, 0.0);
        EXPECT_LE(r.fMeasure, 1.0 + 1e-12);
        EXPECT_GE(r.nvd, 0.0);
        EXPECT_LT(r.nvd, 1.0);
    }
}

TEST(Matching, CommunityOrderDoesNotMatter) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + rng() % 200;
        auto g = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 15));
        auto d = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 15));
        auto a = matching(g, d);
        auto b = matching(relabeled(g, rng), relabeled(d, rng));
        EXPECT_NEAR(a.fMeasure, b.fMeasure, 1e-12);
        EXPECT_EQ(a.nvd, b.nvd);
    }
}

TEST(Matching, ShardwiseUpdatesMergeToWholeResult) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + rng() % 200;
        auto g = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 15));
        auto d = oracle::partition_of(oracle::random_labels(rng, n, 1 + rng() % 15));
        const std::size_t w = 1 + rng() % 5;
        auto merged = MatchMaxima::zeros(g.community_count(), d.community_count());
        for (std::size_t i = 0; i < w; ++i) {
            auto partial = MatchMaxima::zeros(g.community_count(), d.community_count());
            for (std::size_t j = 0; j < w; ++j) update_maxima(partial, shard(g, w, i), shard(d, w, j));
            // applying a shard pair twice changes nothing
            update_maxima(partial, shard(g, w, i), shard(d, w, 0));
            merged.merge(partial);
        }
        EXPECT_EQ(merged, match_maxima(g, d));
    }
}

TEST(Matching, ZeroUniverseRejected) {
    MatchMaxima m;
    EXPECT_THROW(nvd(m, 0), std::invalid_argument);
}
