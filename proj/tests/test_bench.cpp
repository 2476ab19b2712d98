#include <gtest/gtest.h>

#include <map>
#include <sstream>
#include <thread>

#include "cqt/bench.hpp"
#include "cqt/intrinsic_metrics.hpp"
#include "cqt/io.hpp"

using namespace cqt;

TEST(Speedup, Definitions) {
    auto se = speedup_efficiency(100, 25, 8);
    EXPECT_DOUBLE_EQ(se.speedup, 4.0);
    EXPECT_DOUBLE_EQ(se.efficiency, 0.5);
    se = speedup_efficiency(3.7, 3.7, 1);
    EXPECT_EQ(se.speedup, 1.0);
    EXPECT_EQ(se.efficiency, 1.0);
    se = speedup_efficiency(10, 2, 4); // super-linear is reported as is
    EXPECT_GT(se.efficiency, 1.0);
    EXPECT_THROW(speedup_efficiency(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(speedup_efficiency(1, -1, 1), std::invalid_argument);
    EXPECT_THROW(speedup_efficiency(1, 1, 0), std::invalid_argument);
}

TEST(Generator, DeterministicForSeed) {
    GeneratorParams p;
    p.nodeCount = 1000;
    p.seed = 42;
    auto a = generate_network(p), b = generate_network(p);
    std::ostringstream ea, eb, ca, cb;
    write_edge_list(ea, a.network);
    write_edge_list(eb, b.network);
    write_communities(ca, a.communities);
    write_communities(cb, b.communities);
    EXPECT_EQ(ea.str(), eb.str());
    EXPECT_EQ(ca.str(), cb.str());
    p.seed = 43;
    std::ostringstream ec;
    write_edge_list(ec, generate_network(p).network);
    EXPECT_NE(ea.str(), ec.str());
}

TEST(Generator, OutputPassesValidation) {
    GeneratorParams p;
    p.nodeCount = 5000;
    p.seed = 3;
    auto g = generate_network(p);
    EXPECT_TRUE(g.network.is_valid());
    EXPECT_TRUE(g.communities.covers_universe());
    EXPECT_EQ(g.communities.universe_size(), g.network.node_count());
    std::size_t oversized = 0;
    for (auto s : g.communities.sizes()) {
        EXPECT_GE(s, p.minCommunity);
        oversized += s > p.maxCommunity;
    }
    EXPECT_LE(oversized, 1u); // only the remainder community may exceed the range
    for (NodeId v = 0; v < g.network.node_count(); ++v) EXPECT_LE(g.network.degree(v), p.maxDegree);
}

TEST(Generator, DegreeAndMixingStatistics) {
    GeneratorParams p;
    p.nodeCount = 100000;
    p.seed = 7;
    auto g = generate_network(p);
    const double mean = 2.0 * static_cast<double>(g.network.edge_count()) / static_cast<double>(p.nodeCount);
    EXPECT_NEAR(mean, 15.0, 0.05 * 15.0);
    for (const auto &s : community_stats(g.network, g.communities)) {
        const double mixing = static_cast<double>(s.outEdges) / static_cast<double>(2 * s.inEdges + s.outEdges);
        EXPECT_NEAR(mixing, 0.3, 0.05) << "community " << s.id;
    }
}

TEST(Generator, RejectsInfeasibleParameters) {
    GeneratorParams p;
    p.minCommunity = 20; // internal degree up to 35 does not fit
    EXPECT_THROW(generate_network(p), std::invalid_argument);
    p = {};
    p.mixing = 1.5;
    EXPECT_THROW(generate_network(p), std::invalid_argument);
    p = {};
    p.avgDegree = 60;
    EXPECT_THROW(generate_network(p), std::invalid_argument);
    p = {};
    p.nodeCount = 50;
    EXPECT_THROW(generate_network(p), std::invalid_argument);
    p = {};
    p.minCommunity = 200;
    p.maxCommunity = 100;
    EXPECT_THROW(generate_network(p), std::invalid_argument);
}

TEST(Generator, PerturbMovesRoughlyTheRequestedShare) {
    GeneratorParams p;
    p.nodeCount = 20000;
    auto g = generate_network(p);
    auto d = perturb_partition(g.communities, 0.2, 5);
    auto gm = to_node_map(g.communities), dm = to_node_map(d);
    EXPECT_TRUE(d.covers_universe());
    // the largest detected share of each ground community is the part left in place
    std::size_t same = 0;
    for (CommunityId c = 0; c < g.communities.community_count(); ++c) {
        std::map<CommunityId, std::size_t> votes;
        for (auto v : g.communities.members(c)) ++votes[dm[v]];
        std::size_t best = 0;
        for (auto &[k, n] : votes) best = std::max(best, n);
        same += best;
    }
    EXPECT_NEAR(static_cast<double>(same) / static_cast<double>(p.nodeCount), 0.8, 0.02);
    EXPECT_EQ(perturb_partition(g.communities, 0.0, 5), from_node_map(gm));
}

namespace {

StudyInputs small_inputs() {
    GeneratorParams p;
    p.nodeCount = 3000;
    auto g = generate_network(p);
    auto d = perturb_partition(g.communities, 0.1, 2);
    return {std::move(g.network), std::move(g.communities), std::move(d)};
}

} // namespace

TEST(ScalingStudy, RowsAndDerivedColumns) {
    StudyTask task{{MetricFamily::Info, MetricFamily::Pair, MetricFamily::Intrinsic}, Backend::MessagePassing,
                   small_inputs};
    auto r = run_scaling_study(task, {1, 2, 3}, 3);
    ASSERT_EQ(r.rows.size(), 9u);
    EXPECT_GT(r.loadSeconds, 0.0);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto &row = r.rows[i];
        const auto &first = r.rows[i - i % 3];
        EXPECT_EQ(first.workers, 1u);
        EXPECT_EQ(first.backend, Backend::Sequential);
        EXPECT_GT(row.totalSeconds, 0.0);
        // recomputing from the timing columns reproduces the derived ones exactly
        const auto se = speedup_efficiency(first.totalSeconds, row.totalSeconds, row.workers);
        EXPECT_EQ(row.speedup, se.speedup);
        EXPECT_EQ(row.efficiency, se.efficiency);
        if (row.workers == 1) { EXPECT_EQ(row.speedup, 1.0); }
        if (row.family == MetricFamily::Intrinsic) {
            EXPECT_EQ(row.messageSeconds, 0.0);
            EXPECT_EQ(row.messageBytes, 0u);
        }
    }
}

TEST(ScalingStudy, SequentialOnlyStudy) {
    StudyTask task{{MetricFamily::Matching}, Backend::SharedMemory, small_inputs};
    auto r = run_scaling_study(task, {1}, 3);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].speedup, 1.0);
    EXPECT_EQ(r.rows[0].efficiency, 1.0);
}

TEST(ScalingStudy, CsvSchemaAndExactValues) {
    StudyTask task{{MetricFamily::Pair}, Backend::SharedMemory, small_inputs};
    auto r = run_scaling_study(task, {1, 2}, 3);
    std::ostringstream out;
    write_scaling_csv(out, r);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "family,backend,workers,total_s,compute_s,message_s,speedup,efficiency");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        ASSERT_EQ(cols.size(), 8u);
        EXPECT_EQ(std::stod(cols[3]), r.rows[rows].totalSeconds);
        EXPECT_EQ(std::stod(cols[6]), r.rows[rows].speedup);
        ++rows;
    }
    EXPECT_EQ(rows, 2u);
}

TEST(ScalingStudy, RejectsBadWorkerLists) {
    StudyTask task{{MetricFamily::Info}, Backend::SharedMemory, small_inputs};
    EXPECT_THROW(run_scaling_study(task, {2, 4}, 3), std::invalid_argument);
    EXPECT_THROW(run_scaling_study(task, {1, 4, 2}, 3), std::invalid_argument);
    EXPECT_THROW(run_scaling_study(task, {1, 2}, 0), std::invalid_argument);
}

TEST(ScalingStudy, LoadIsTimedSeparately) {
    StudyTask task{{MetricFamily::Info}, Backend::SharedMemory, [] {
                       std::this_thread::sleep_for(std::chrono::milliseconds(300));
                       return small_inputs();
                   }};
    auto r = run_scaling_study(task, {1, 2}, 3);
    EXPECT_GE(r.loadSeconds, 0.3);
    for (const auto &row : r.rows) EXPECT_LT(row.totalSeconds, 0.3);
}

TEST(ScalingStudy, DivergenceCheck) {
    EXPECT_TRUE(close_relative(1.0, 1.0 + 1e-10, 1e-9));
    EXPECT_FALSE(close_relative(1.0, 1.0 + 1e-8, 1e-9));
    EXPECT_TRUE(close_relative(0.0, 1e-13, 1e-9));
}
