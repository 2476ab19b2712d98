#pragma once

// Scaling studies and a planted-partition network generator.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqt/graph.hpp"
#include "cqt/parallel/engine.hpp"

namespace cqt {

struct SpeedupEfficiency {
    double speedup;
    double efficiency;
};

/// speedup = t1 / tp, efficiency = speedup / p. Efficiency above 1 is allowed.
inline SpeedupEfficiency speedup_efficiency(double t1, double tp, std::size_t p) {
    if (!(t1 > 0.0) || !(tp > 0.0)) throw std::invalid_argument("timings must be positive");
    if (p == 0) throw std::invalid_argument("worker count must be positive");
    const double s = t1 / tp;
    return {s, s / static_cast<double>(p)};
}

// ---------------------------------------------------------------------------
// Generator

struct GeneratorParams {
    std::size_t nodeCount = 1000;
    double avgDegree = 15.0;
    std::size_t maxDegree = 50;
    double mixing = 0.3;
    std::size_t minCommunity = 40;
    std::size_t maxCommunity = 100;
    std::uint64_t seed = 1;
};

struct GeneratedNetwork {
    Network network;
    Partition communities;
    /// Stubs that found no valid partner after all re-pairing passes.
    std::uint64_t droppedStubs = 0;
};

/// Largest internal degree a node can ask for.
inline std::size_t max_internal_degree(const GeneratorParams &p) {
    return static_cast<std::size_t>(std::ceil((1.0 - p.mixing) * static_cast<double>(p.maxDegree)));
}

inline void validate(const GeneratorParams &p) {
    if (p.nodeCount < 2) throw std::invalid_argument("generator needs at least two nodes");
    if (!(p.mixing >= 0.0 && p.mixing <= 1.0)) throw std::invalid_argument("mixing must lie in [0, 1]");
    if (!(p.avgDegree > 0.0)) throw std::invalid_argument("average degree must be positive");
    if (p.avgDegree > static_cast<double>(p.maxDegree))
        throw std::invalid_argument("average degree exceeds maximum degree");
    if (p.maxDegree >= p.nodeCount) throw std::invalid_argument("maximum degree must be below node count");
    if (p.minCommunity == 0 || p.minCommunity > p.maxCommunity)
        throw std::invalid_argument("invalid community size range");
    if (p.minCommunity > p.nodeCount) throw std::invalid_argument("smallest community exceeds node count");
    if (p.minCommunity < max_internal_degree(p) + 1)
        throw std::invalid_argument("infeasible: communities of size " + std::to_string(p.minCommunity) +
                                    " cannot hold internal degree " + std::to_string(max_internal_degree(p)));
    if (p.mixing > 0.0 && p.maxCommunity >= p.nodeCount)
        throw std::invalid_argument("infeasible: external edges need at least two communities");
}

namespace detail {

/// Rate of an exponential truncated to [lo, hi] whose mean is `mean`.
/// Negative rates give a density increasing towards hi.
inline double truncated_exponential_rate(double lo, double hi, double mean) {
    const double w = hi - lo;
    auto meanFor = [&](double rate) {
        if (std::abs(rate * w) < 1e-9) return lo + w / 2.0;
        return lo + 1.0 / rate - w / std::expm1(rate * w);
    };
    double a = -200.0 / w, b = 200.0 / w; // meanFor is decreasing in rate
    for (int i = 0; i < 200; ++i) {
        const double mid = (a + b) / 2.0;
        if (meanFor(mid) > mean)
            a = mid;
        else
            b = mid;
    }
    return (a + b) / 2.0;
}

inline double sample_truncated_exponential(std::mt19937_64 &rng, double lo, double hi, double rate) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double w = hi - lo;
    if (std::abs(rate * w) < 1e-9) return lo + u * w;
    // inverse CDF of rate * exp(-rate x) / (1 - exp(-rate w)) on [0, w]
    return lo - std::log1p(u * std::expm1(-rate * w)) / rate;
}

inline std::uint64_t stochastic_round(std::mt19937_64 &rng, double x) {
    const double f = std::floor(x);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return static_cast<std::uint64_t>(f) + (u < x - f ? 1 : 0);
}

inline std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t{u} << 32) | v;
}

} // namespace detail

/// Planted-partition graph: community sizes uniform in [minCommunity,
/// maxCommunity], degrees from a truncated exponential on
/// [avgDegree/2, maxDegree] with mean avgDegree, each degree split into
/// internal and external stubs by the mixing fraction. Stubs are paired at
/// random; self-loops, repeated edges and (for external stubs) same-community
/// pairs are returned to the pool and re-paired. Deterministic for a seed.
inline GeneratedNetwork generate_network(const GeneratorParams &params) {
    validate(params);
    std::mt19937_64 rng(params.seed);
    const std::size_t n = params.nodeCount;

    // community sizes; the last community absorbs a remainder that cannot be split
    std::vector<std::size_t> sizes;
    for (std::size_t remaining = n; remaining > 0;) {
        std::size_t s;
        const std::size_t hi = std::min(params.maxCommunity, remaining >= params.minCommunity ? remaining - params.minCommunity : 0);
        if (remaining <= params.maxCommunity || hi < params.minCommunity)
            s = remaining;
        else
            s = std::uniform_int_distribution<std::size_t>(params.minCommunity, hi)(rng);
        sizes.push_back(s);
        remaining -= s;
    }
    if (params.mixing > 0.0 && sizes.size() < 2)
        throw std::invalid_argument("infeasible: external edges need at least two communities");

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<NodeId>> groups;
    std::vector<CommunityId> label(n);
    for (std::size_t c = 0, pos = 0; c < sizes.size(); ++c) {
        groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                            order.begin() + static_cast<std::ptrdiff_t>(pos + sizes[c]));
        std::sort(groups.back().begin(), groups.back().end());
        for (NodeId v : groups.back()) label[v] = static_cast<CommunityId>(c);
        pos += sizes[c];
    }

    const double lo = params.avgDegree / 2.0;
    const double hi = static_cast<double>(params.maxDegree);
    const double rate = hi > lo ? detail::truncated_exponential_rate(lo, hi, params.avgDegree) : 0.0;
    std::vector<std::vector<NodeId>> internalStubs(sizes.size());
    std::vector<NodeId> externalStubs;
    for (NodeId v = 0; v < n; ++v) {
        const double x = hi > lo ? detail::sample_truncated_exponential(rng, lo, hi, rate) : hi;
        const std::uint64_t k = std::clamp<std::uint64_t>(detail::stochastic_round(rng, x), 1, params.maxDegree);
        const std::uint64_t kin = std::min<std::uint64_t>(
            detail::stochastic_round(rng, (1.0 - params.mixing) * static_cast<double>(k)),
            std::min<std::uint64_t>(k, groups[label[v]].size() - 1));
        internalStubs[label[v]].insert(internalStubs[label[v]].end(), kin, v);
        externalStubs.insert(externalStubs.end(), k - kin, v);
    }

    GeneratedNetwork out;
    std::vector<std::uint64_t> edges, fresh;
    auto pairUp = [&](std::vector<NodeId> &pool, bool external) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<NodeId> rest;
        std::size_t i = 0;
        for (; i + 1 < pool.size(); i += 2) {
            const NodeId u = pool[i], v = pool[i + 1];
            if (u == v || (external && label[u] == label[v])) {
                rest.push_back(u);
                rest.push_back(v);
            } else {
                fresh.push_back(detail::edge_key(u, v));
            }
        }
        if (i < pool.size()) rest.push_back(pool[i]);
        pool = std::move(rest);
    };

    auto leftover = [&] {
        std::size_t left = externalStubs.size();
        for (const auto &pool : internalStubs) left += pool.size();
        return left;
    };
    // edges stays sorted and duplicate-free; each pass pairs into `fresh`
    constexpr int kMaxPasses = 100, kMaxIdlePasses = 3;
    for (int pass = 0, idle = 0; pass < kMaxPasses && idle < kMaxIdlePasses; ++pass) {
        const std::size_t before = leftover();
        if (before < 2) break;
        for (auto &pool : internalStubs) pairUp(pool, false);
        pairUp(externalStubs, true);
        // repeated edges give their stubs back
        std::sort(fresh.begin(), fresh.end());
        std::size_t w = 0;
        for (std::size_t r = 0; r < fresh.size(); ++r) {
            const std::uint64_t key = fresh[r];
            if ((w > 0 && fresh[w - 1] == key) || std::binary_search(edges.begin(), edges.end(), key)) {
                const NodeId u = static_cast<NodeId>(key >> 32), v = static_cast<NodeId>(key & 0xffffffffu);
                auto &pool = label[u] == label[v] ? internalStubs[label[u]] : externalStubs;
                pool.push_back(u);
                pool.push_back(v);
            } else {
                fresh[w++] = key;
            }
        }
        fresh.resize(w);
        const auto mid = edges.size();
        edges.insert(edges.end(), fresh.begin(), fresh.end());
        std::inplace_merge(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(mid), edges.end());
        fresh.clear();
        idle = leftover() < before ? 0 : idle + 1;
    }
    out.droppedStubs = externalStubs.size();
    for (const auto &pool : internalStubs) out.droppedStubs += pool.size();

    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(edges.size());
    for (auto key : edges) pairs.emplace_back(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu));
    out.network = Network::from_edges(n, std::move(pairs));
    out.communities = Partition(groups, n);
    return out;
}

/// Moves roughly `fraction` of the nodes to a random other community. Used
/// to make a plausible detected partition from a ground truth.
inline Partition perturb_partition(const Partition &p, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction must lie in [0, 1]");
    const auto map = to_node_map(p);
    std::vector<CommunityId> next(map.labels().begin(), map.labels().end());
    const std::size_t k = p.community_count();
    if (k < 2) return p;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, k - 2);
    for (auto &c : next) {
        if (c == kUnassigned || coin(rng) >= fraction) continue;
        const auto other = static_cast<CommunityId>(pick(rng));
        c = other >= c ? other + 1 : other;
    }
    return from_node_map(NodeCommunityMap(std::move(next)));
}

// ---------------------------------------------------------------------------
// Scaling study

enum class MetricFamily { Info, Matching, Pair, PairEnumerate, Intrinsic };

inline std::string to_string(MetricFamily f) {
    switch (f) {
    case MetricFamily::Info: return "info";
    case MetricFamily::Matching: return "matching";
    case MetricFamily::Pair: return "pair";
    case MetricFamily::PairEnumerate: return "pair-bruteforce";
    case MetricFamily::Intrinsic: return "intrinsic";
    }
    return "?";
}

inline MetricFamily parse_family(const std::string &name) {
    for (auto f : {MetricFamily::Info, MetricFamily::Matching, MetricFamily::Pair, MetricFamily::PairEnumerate,
                   MetricFamily::Intrinsic})
        if (to_string(f) == name) return f;
    throw std::invalid_argument("unknown metric family '" + name + "'");
}

struct StudyInputs {
    Network network;     // Intrinsic only
    Partition ground;    // the partition evaluated by Intrinsic
    Partition detected;  // ground-truth families only
};

struct FamilyResult {
    std::vector<double> values;
    std::optional<PairCounts> counts;
    parallel::ExecutionReport report;
};

inline FamilyResult evaluate_family(MetricFamily family, const StudyInputs &in, BackendConfig cfg) {
    FamilyResult r;
    switch (family) {
    case MetricFamily::Info: {
        auto run = run_info_metrics(in.ground, in.detected, cfg);
        r.values = {run.value.vi, run.value.nmi};
        r.report = std::move(run.report);
        break;
    }
    case MetricFamily::Matching: {
        auto run = run_matching_metrics(in.ground, in.detected, cfg);
        r.values = {run.value.fMeasure, run.value.nvd};
        r.report = std::move(run.report);
        break;
    }
    case MetricFamily::Pair:
    case MetricFamily::PairEnumerate: {
        cfg.pairMode = family == MetricFamily::Pair ? PairCountingMode::Contingency : PairCountingMode::Enumerate;
        auto run = run_pair_metrics(in.ground, in.detected, cfg);
        r.values = {run.value.indices.ri, run.value.indices.ari, run.value.indices.ji};
        r.counts = run.value.counts;
        r.report = std::move(run.report);
        break;
    }
    case MetricFamily::Intrinsic: {
        auto run = run_intrinsic_metrics(in.network, in.ground, cfg);
        const auto &v = run.value;
        r.values = {v.modularity,        v.modularityDensity, v.means.intraEdges, v.means.intraDensity,
                    v.means.contraction, v.means.interEdges,  v.means.expansion,  v.means.conductance};
        r.report = std::move(run.report);
        break;
    }
    }
    return r;
}

/// |a - b| <= tol * max(|a|, |b|), with an absolute floor for values near 0.
inline bool close_relative(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-3});
}

class StudyDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScalingRow {
    MetricFamily family;
    Backend backend;
    std::size_t workers;
    double totalSeconds;
    double computeSeconds;
    double messageSeconds;
    double speedup;
    double efficiency;
    std::uint64_t messageBytes;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    double loadSeconds = 0.0;
};

struct StudyTask {
    std::vector<MetricFamily> families;
    Backend backend = Backend::SharedMemory;
    /// Called once, timed separately from the metric runs.
    std::function<StudyInputs()> load;
};

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of nothing");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

/// For each family and worker count, runs `repetitions` times and keeps the
/// median of each timing column. Total time is the slowest worker's timed
/// phase; per-worker setup (building shards and local networks) is not
/// counted, nor is loading. Any metric value differing from the one-worker
/// run by more than 1e-9 relative (pair counts: at all) aborts the study.
inline ScalingResult run_scaling_study(const StudyTask &task, const std::vector<std::size_t> &workerCounts,
                                       std::size_t repetitions) {
    if (workerCounts.empty() || workerCounts.front() != 1)
        throw std::invalid_argument("worker counts must start at 1");
    if (!std::is_sorted(workerCounts.begin(), workerCounts.end()) ||
        std::adjacent_find(workerCounts.begin(), workerCounts.end()) != workerCounts.end())
        throw std::invalid_argument("worker counts must be strictly ascending");
    if (repetitions == 0) throw std::invalid_argument("repetitions must be positive");
    if (!task.load) throw std::invalid_argument("study has no input loader");

    ScalingResult result;
    const auto start = std::chrono::steady_clock::now();
    const StudyInputs inputs = task.load();
    result.loadSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (MetricFamily family : task.families) {
        FamilyResult reference;
        double t1 = 0.0;
        for (std::size_t w : workerCounts) {
            BackendConfig cfg;
            cfg.backend = task.backend;
            cfg.numWorkers = w;
            std::vector<double> total, compute, message;
            std::uint64_t bytes = 0;
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                auto r = evaluate_family(family, inputs, cfg);
                if (w == 1 && rep == 0) {
                    reference = r;
                } else {
                    for (std::size_t i = 0; i < r.values.size(); ++i)
                        if (!close_relative(r.values[i], reference.values[i], 1e-9))
                            throw StudyDivergence(to_string(family) + " with " + std::to_string(w) +
                                                  " workers diverged from the one-worker value");
                    if (r.counts != reference.counts)
                        throw StudyDivergence(to_string(family) + " pair counts differ with " + std::to_string(w) +
                                              " workers");
                }
                total.push_back(r.report.timing.maxTotal);
                compute.push_back(r.report.timing.maxCompute);
                message.push_back(r.report.timing.maxMessage);
                bytes = r.report.transport.bytes;
            }
            ScalingRow row{family, w == 1 ? Backend::Sequential : task.backend, w, median(total), median(compute),
                           median(message), 1.0, 1.0, bytes};
            // clock resolution floor so a trivially fast run still divides
            row.totalSeconds = std::max(row.totalSeconds, 1e-9);
            if (w == 1) t1 = row.totalSeconds;
            const auto se = speedup_efficiency(t1, row.totalSeconds, w);
            row.speedup = se.speedup;
            row.efficiency = se.efficiency;
            result.rows.push_back(row);
        }
    }
    return result;
}

inline void write_scaling_csv(std::ostream &out, const ScalingResult &r) {
    out << "family,backend,workers,total_s,compute_s,message_s,speedup,efficiency\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto &row : r.rows)
        out << to_string(row.family) << ',' << to_string(row.backend) << ',' << row.workers << ','
            << row.totalSeconds << ',' << row.computeSeconds << ',' << row.messageSeconds << ',' << row.speedup
            << ',' << row.efficiency << '\n';
    out.flags(flags);
    out.precision(precision);
}

} // namespace cqt
