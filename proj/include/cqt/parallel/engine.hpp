#pragma once

// Execution backends for the four metric families.
//
//   Sequential     one worker, library calls on whole partitions.
//   SharedMemory   threads share the inputs read-only; communities (or, for
//                  pair enumeration, node rows) are striped by id mod workers.
//   MessagePassing isolated workers own their community shards and exchange
//                  serialized shards around a ring.
//
// Partial results are reduced in worker-id order. A worker count of 1 always
// runs the sequential backend.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqt/contingency.hpp"
#include "cqt/graph.hpp"
#include "cqt/info_metrics.hpp"
#include "cqt/intrinsic_metrics.hpp"
#include "cqt/matching_metrics.hpp"
#include "cqt/pair_metrics.hpp"
#include "cqt/parallel/ring.hpp"

namespace cqt {

enum class Backend { Sequential, SharedMemory, MessagePassing };

enum class PairCountingMode {
    Contingency, // overlap sizes, linear time
    Enumerate    // visits every node pair, quadratic time
};

inline std::string to_string(Backend b) {
    switch (b) {
    case Backend::Sequential: return "seq";
    case Backend::SharedMemory: return "shm";
    case Backend::MessagePassing: return "ring";
    }
    return "?";
}

inline Backend parse_backend(const std::string &name) {
    if (name == "seq") return Backend::Sequential;
    if (name == "shm") return Backend::SharedMemory;
    if (name == "ring") return Backend::MessagePassing;
    throw std::invalid_argument("unknown backend '" + name + "' (expected seq, shm or ring)");
}

struct BackendConfig {
    Backend backend = Backend::Sequential;
    std::size_t numWorkers = 1;
    bool timerEnabled = true;
    /// Ring channel capacity in messages; sends are buffered up to this many.
    std::size_t channelCapacity = 1;
    /// Zero waits forever.
    std::chrono::milliseconds receiveTimeout{0};
    PairCountingMode pairMode = PairCountingMode::Contingency;
    parallel::RoundHook roundHook;

    Backend effective_backend() const {
        if (numWorkers == 0) throw std::invalid_argument("worker count must be positive");
        return numWorkers == 1 ? Backend::Sequential : backend;
    }
};

template <typename T>
struct Run {
    T value;
    parallel::ExecutionReport report;
};

namespace detail {

/// Counts, per community label, how many of a member list carry it.
class LabelCounter {
public:
    explicit LabelCounter(std::size_t labelCount) : counts_(labelCount, 0) {}

    /// fn(label, count) for each label present, ascending; kUnassigned skipped.
    template <typename Fn>
    void count(std::span<const NodeId> members, const NodeCommunityMap &labels, Fn &&fn) {
        touched_.clear();
        for (NodeId v : members) {
            const CommunityId c = labels[v];
            if (c == kUnassigned) continue;
            if (counts_[c]++ == 0) touched_.push_back(c);
        }
        std::sort(touched_.begin(), touched_.end());
        for (CommunityId c : touched_) {
            fn(c, counts_[c]);
            counts_[c] = 0;
        }
    }

private:
    std::vector<std::uint64_t> counts_;
    std::vector<CommunityId> touched_;
};

template <typename Setup, typename Work>
auto execute(const BackendConfig &cfg, Backend backend, Setup &&setup, Work &&work,
             parallel::ExecutionReport &report) {
    const std::size_t workers = backend == Backend::Sequential ? 1 : cfg.numWorkers;
    std::unique_ptr<parallel::RingTransport> transport;
    if (backend == Backend::MessagePassing)
        transport = std::make_unique<parallel::RingTransport>(workers, cfg.channelCapacity, cfg.receiveTimeout);
    auto partials = parallel::run_workers(workers, transport.get(), &cfg.roundHook, setup, work, report);
    if (!cfg.timerEnabled) {
        auto audit = std::move(report.audit);
        auto transportStats = report.transport;
        report = {};
        report.audit = std::move(audit);
        report.transport = transportStats;
    }
    return partials;
}

inline void require_same_universe(const Partition &a, const Partition &b) {
    if (a.universe_size() != b.universe_size()) throw std::invalid_argument("partitions are over different universes");
    if (a.universe_size() == 0) throw std::invalid_argument("universe size is zero");
}

inline parallel::RingMessage shard_message(CommunityBlock block) {
    parallel::RingMessage m;
    m.kind = parallel::PayloadKind::Communities;
    m.block = std::move(block);
    return m;
}

inline void add_overlaps(InfoAccumulator &acc, OverlapScanner &scanner, const CommunityBlock &ground,
                         const CommunityBlock &detected, std::size_t universe) {
    InfoAccumulator local;
    for_each_overlap(scanner, ground, detected, [&](std::size_t gi, std::size_t di, std::uint64_t n) {
        local.add_overlap(n, ground.members_of(gi).size(), detected.members_of(di).size(), universe);
    });
    acc += local;
}

} // namespace detail

// ---------------------------------------------------------------------------
// VI / NMI

inline Run<InfoMetrics> run_info_metrics(const Partition &ground, const Partition &detected,
                                         const BackendConfig &cfg) {
    detail::require_same_universe(ground, detected);
    const std::size_t universe = ground.universe_size();
    const Backend backend = cfg.effective_backend();
    const std::size_t w = cfg.numWorkers;
    Run<InfoMetrics> out;
    std::vector<InfoAccumulator> partials;

    if (backend == Backend::Sequential) {
        partials = detail::execute(
            cfg, backend, [](std::size_t) { return 0; },
            [&](int &, parallel::WorkerContext &ctx) {
                return ctx.compute([&] { return accumulate_info(build_contingency(ground, detected)); });
            },
            out.report);
    } else if (backend == Backend::SharedMemory) {
        const auto detectedMap = to_node_map(detected);
        partials = detail::execute(
            cfg, backend, [&](std::size_t) { return detail::LabelCounter(detected.community_count()); },
            [&](detail::LabelCounter &counter, parallel::WorkerContext &ctx) {
                return ctx.compute([&] {
                    InfoAccumulator acc;
                    for (std::size_t c = ctx.id(); c < ground.community_count(); c += w) {
                        const auto cid = static_cast<CommunityId>(c);
                        InfoAccumulator row;
                        counter.count(ground.members(cid), detectedMap, [&](CommunityId d, std::uint64_t n) {
                            row.add_overlap(n, ground.community_size(cid), detected.community_size(d), universe);
                        });
                        acc += row;
                        acc.add_community(ground.community_size(cid), universe);
                    }
                    for (std::size_t d = ctx.id(); d < detected.community_count(); d += w)
                        acc.add_community(detected.community_size(static_cast<CommunityId>(d)), universe);
                    return acc;
                });
            },
            out.report);
    } else {
        struct State {
            PartitionShard ground, detected;
            OverlapScanner scanner;
        };
        partials = detail::execute(
            cfg, backend,
            [&](std::size_t p) { return State{shard(ground, w, p), shard(detected, w, p), OverlapScanner(universe)}; },
            [&](State &s, parallel::WorkerContext &ctx) {
                InfoAccumulator acc;
                ctx.compute([&] {
                    detail::add_overlaps(acc, s.scanner, s.ground.block, s.detected.block, universe);
                    for (std::size_t i = 0; i < s.ground.block.size(); ++i)
                        acc.add_community(s.ground.block.members_of(i).size(), universe);
                    for (std::size_t i = 0; i < s.detected.block.size(); ++i)
                        acc.add_community(s.detected.block.members_of(i).size(), universe);
                });
                ctx.circulate("detected", detail::shard_message(s.detected.block),
                              [&](const parallel::RingMessage &m) {
                                  detail::add_overlaps(acc, s.scanner, s.ground.block, m.block, universe);
                              });
                return acc;
            },
            out.report);
    }

    InfoAccumulator total;
    for (const auto &p : partials) total += p;
    out.value = total.finish(universe);
    return out;
}

// ---------------------------------------------------------------------------
// F-measure / NVD

namespace detail {

struct MatchPartial {
    double fNumerator = 0.0;     // Σ |c| maxNormed(c)
    std::uint64_t matched = 0;   // Σ maxT + Σ maxD
};

inline MatchingMetrics finish_matching(std::span<const MatchPartial> partials, std::size_t universe) {
    double f = 0.0;
    std::uint64_t matched = 0;
    for (const auto &p : partials) {
        f += p.fNumerator;
        matched += p.matched;
    }
    const double v = static_cast<double>(universe);
    return {f / v, 1.0 - static_cast<double>(matched) / (2.0 * v)};
}

} // namespace detail

inline Run<MatchingMetrics> run_matching_metrics(const Partition &ground, const Partition &detected,
                                                 const BackendConfig &cfg) {
    detail::require_same_universe(ground, detected);
    const std::size_t universe = ground.universe_size();
    const Backend backend = cfg.effective_backend();
    const std::size_t w = cfg.numWorkers;
    Run<MatchingMetrics> out;

    if (backend == Backend::Sequential) {
        auto partials = detail::execute(
            cfg, backend, [](std::size_t) { return 0; },
            [&](int &, parallel::WorkerContext &ctx) {
                return ctx.compute([&] {
                    const auto m = match_maxima(ground, detected);
                    const auto sizes = ground.sizes();
                    return MatchingMetrics{f_measure(m, sizes, universe), nvd(m, universe)};
                });
            },
            out.report);
        out.value = partials.front();
        return out;
    }

    std::vector<detail::MatchPartial> partials;
    if (backend == Backend::SharedMemory) {
        const auto groundMap = to_node_map(ground);
        const auto detectedMap = to_node_map(detected);
        struct State {
            detail::LabelCounter byDetected, byGround;
        };
        partials = detail::execute(
            cfg, backend,
            [&](std::size_t) {
                return State{detail::LabelCounter(detected.community_count()),
                             detail::LabelCounter(ground.community_count())};
            },
            [&](State &s, parallel::WorkerContext &ctx) {
                return ctx.compute([&] {
                    detail::MatchPartial part;
                    for (std::size_t c = ctx.id(); c < ground.community_count(); c += w) {
                        const auto cid = static_cast<CommunityId>(c);
                        const auto size = ground.community_size(cid);
                        double bestNormed = 0.0;
                        std::uint64_t best = 0;
                        s.byDetected.count(ground.members(cid), detectedMap, [&](CommunityId d, std::uint64_t n) {
                            bestNormed = std::max(bestNormed, 2.0 * static_cast<double>(n) /
                                                                  static_cast<double>(size + detected.community_size(d)));
                            best = std::max(best, n);
                        });
                        part.fNumerator += static_cast<double>(size) * bestNormed;
                        part.matched += best;
                    }
                    for (std::size_t d = ctx.id(); d < detected.community_count(); d += w) {
                        std::uint64_t best = 0;
                        s.byGround.count(detected.members(static_cast<CommunityId>(d)), groundMap,
                                         [&](CommunityId, std::uint64_t n) { best = std::max(best, n); });
                        part.matched += best;
                    }
                    return part;
                });
            },
            out.report);
    } else {
        struct State {
            PartitionShard ground, detected;
            OverlapScanner scanner;
            MatchMaxima maxima;
        };
        partials = detail::execute(
            cfg, backend,
            [&](std::size_t p) {
                return State{shard(ground, w, p), shard(detected, w, p), OverlapScanner(universe),
                             MatchMaxima::zeros(ground.community_count(), detected.community_count())};
            },
            [&](State &s, parallel::WorkerContext &ctx) {
                const auto &own = s.ground.block;
                const auto &ownDetected = s.detected.block;
                ctx.compute([&] { update_ground_maxima(s.maxima, s.scanner, own, ownDetected); });
                ctx.circulate("detected", detail::shard_message(ownDetected), [&](const parallel::RingMessage &m) {
                    update_ground_maxima(s.maxima, s.scanner, own, m.block);
                });
                ctx.compute([&] { update_detected_maxima(s.maxima, s.scanner, ownDetected, own); });
                ctx.circulate("ground", detail::shard_message(own), [&](const parallel::RingMessage &m) {
                    update_detected_maxima(s.maxima, s.scanner, ownDetected, m.block);
                });
                return ctx.compute([&] {
                    detail::MatchPartial part;
                    for (std::size_t i = 0; i < own.size(); ++i) {
                        part.fNumerator += static_cast<double>(own.members_of(i).size()) * s.maxima.maxNormed[own.ids[i]];
                        part.matched += s.maxima.maxT[own.ids[i]];
                    }
                    for (auto d : ownDetected.ids) part.matched += s.maxima.maxD[d];
                    return part;
                });
            },
            out.report);
    }
    out.value = detail::finish_matching(partials, universe);
    return out;
}

// ---------------------------------------------------------------------------
// RI / ARI / JI

namespace detail {

struct PairSums {
    std::uint64_t same = 0, sameGround = 0, sameDetected = 0;
};

/// Counts (u, v) with u local, v received and ground(u) < ground(v). Every
/// such pair is in different ground communities, so only a01 and a00 move.
/// Each cross-shard pair is seen by both owners; the id order picks one.
inline void count_remote_pairs_enumerate(PairCounts &acc, std::span<const std::uint32_t> localGround,
                                         std::span<const std::uint32_t> localDetected,
                                         std::span<const std::uint32_t> remoteGround,
                                         std::span<const std::uint32_t> remoteDetected) {
    std::uint64_t a01 = 0, owned = 0;
    for (std::size_t i = 0; i < localGround.size(); ++i) {
        const std::uint32_t gu = localGround[i];
        const std::uint32_t du = localDetected[i];
        std::uint64_t s = 0, o = 0;
        for (std::size_t j = 0; j < remoteGround.size(); ++j) {
            const std::uint64_t mine = remoteGround[j] > gu;
            o += mine;
            s += mine & static_cast<std::uint64_t>(remoteDetected[j] == du);
        }
        a01 += s;
        owned += o;
    }
    acc.a01 += a01;
    acc.a00 += owned - a01;
}

/// Same tallies as count_remote_pairs_enumerate in linear time: sweep both
/// blocks by descending community id, keeping a detected-label histogram of
/// the received communities whose id exceeds the current local one.
inline void count_remote_pairs_sweep(PairCounts &acc, const CommunityBlock &local,
                                     std::span<const std::uint32_t> localDetected, const CommunityBlock &remote,
                                     std::span<const std::uint32_t> remoteDetected,
                                     std::vector<std::uint64_t> &histogram) {
    std::vector<std::size_t> localOrder(local.size()), remoteOrder(remote.size());
    for (std::size_t i = 0; i < localOrder.size(); ++i) localOrder[i] = i;
    for (std::size_t i = 0; i < remoteOrder.size(); ++i) remoteOrder[i] = i;
    auto byIdDesc = [](const CommunityBlock &b) {
        return [&b](std::size_t x, std::size_t y) { return b.ids[x] > b.ids[y]; };
    };
    std::sort(localOrder.begin(), localOrder.end(), byIdDesc(local));
    std::sort(remoteOrder.begin(), remoteOrder.end(), byIdDesc(remote));

    std::uint64_t inHistogram = 0;
    std::size_t next = 0;
    for (std::size_t li : localOrder) {
        while (next < remoteOrder.size() && remote.ids[remoteOrder[next]] > local.ids[li]) {
            const std::size_t r = remoteOrder[next++];
            for (auto k = remote.offsets[r]; k < remote.offsets[r + 1]; ++k) ++histogram[remoteDetected[k]];
            inHistogram += remote.offsets[r + 1] - remote.offsets[r];
        }
        std::uint64_t same = 0;
        for (auto k = local.offsets[li]; k < local.offsets[li + 1]; ++k) same += histogram[localDetected[k]];
        const std::uint64_t members = local.offsets[li + 1] - local.offsets[li];
        acc.a01 += same;
        acc.a00 += members * inHistogram - same;
    }
    for (std::size_t i = 0; i < next; ++i) {
        const std::size_t r = remoteOrder[i];
        for (auto k = remote.offsets[r]; k < remote.offsets[r + 1]; ++k) histogram[remoteDetected[k]] = 0;
    }
}

/// All pairs inside one worker's own nodes, from overlap sizes.
inline PairCounts count_local_pairs_contingency(const CommunityBlock &local,
                                                std::span<const std::uint32_t> localDetected,
                                                std::vector<std::uint64_t> &histogram) {
    PairCounts p;
    std::uint64_t sameGround = 0, sameDetected = 0;
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < local.size(); ++i) {
        const std::uint64_t size = local.offsets[i + 1] - local.offsets[i];
        sameGround += choose2(size);
        touched.clear();
        for (auto k = local.offsets[i]; k < local.offsets[i + 1]; ++k)
            if (histogram[localDetected[k]]++ == 0) touched.push_back(localDetected[k]);
        for (auto l : touched) {
            p.a11 += choose2(histogram[l]);
            histogram[l] = 0;
        }
    }
    touched.clear();
    for (auto l : localDetected)
        if (histogram[l]++ == 0) touched.push_back(l);
    for (auto l : touched) {
        sameDetected += choose2(histogram[l]);
        histogram[l] = 0;
    }
    p.a10 = sameGround - p.a11;
    p.a01 = sameDetected - p.a11;
    p.a00 = choose2(localDetected.size()) - p.a11 - p.a10 - p.a01;
    return p;
}

} // namespace detail

inline Run<PairMetrics> run_pair_metrics(const Partition &ground, const Partition &detected,
                                         const BackendConfig &cfg) {
    detail::require_same_universe(ground, detected);
    const std::size_t universe = ground.universe_size();
    const Backend backend = cfg.effective_backend();
    const std::size_t w = cfg.numWorkers;
    const bool enumerate = cfg.pairMode == PairCountingMode::Enumerate;
    Run<PairMetrics> out;
    PairCounts counts;

    // Uncovered nodes act as singletons; give them explicit communities or labels.
    std::vector<std::uint32_t> groundLabels, detectedLabels;
    if (enumerate || backend == Backend::MessagePassing) {
        groundLabels = detail::singleton_labels(to_node_map(ground));
        detectedLabels = detail::singleton_labels(to_node_map(detected));
    }

    if (backend == Backend::Sequential) {
        auto partials = detail::execute(
            cfg, backend, [](std::size_t) { return 0; },
            [&](int &, parallel::WorkerContext &ctx) {
                return ctx.compute([&] {
                    if (enumerate) return detail::count_pair_rows(groundLabels, detectedLabels, 0, 1);
                    return pair_counts_fast(build_contingency(ground, detected));
                });
            },
            out.report);
        counts = partials.front();
    } else if (backend == Backend::SharedMemory && enumerate) {
        // node rows i with i mod workers == id
        auto partials = detail::execute(
            cfg, backend, [](std::size_t) { return 0; },
            [&](int &, parallel::WorkerContext &ctx) {
                return ctx.compute([&] { return detail::count_pair_rows(groundLabels, detectedLabels, ctx.id(), w); });
            },
            out.report);
        for (const auto &p : partials) counts += p;
    } else if (backend == Backend::SharedMemory) {
        const auto detectedMap = to_node_map(detected);
        auto partials = detail::execute(
            cfg, backend, [&](std::size_t) { return detail::LabelCounter(detected.community_count()); },
            [&](detail::LabelCounter &counter, parallel::WorkerContext &ctx) {
                return ctx.compute([&] {
                    detail::PairSums s;
                    for (std::size_t c = ctx.id(); c < ground.community_count(); c += w) {
                        const auto cid = static_cast<CommunityId>(c);
                        s.sameGround += choose2(ground.community_size(cid));
                        counter.count(ground.members(cid), detectedMap,
                                      [&](CommunityId, std::uint64_t n) { s.same += choose2(n); });
                    }
                    for (std::size_t d = ctx.id(); d < detected.community_count(); d += w)
                        s.sameDetected += choose2(detected.community_size(static_cast<CommunityId>(d)));
                    return s;
                });
            },
            out.report);
        detail::PairSums s;
        for (const auto &p : partials) {
            s.same += p.same;
            s.sameGround += p.sameGround;
            s.sameDetected += p.sameDetected;
        }
        counts.a11 = s.same;
        counts.a10 = s.sameGround - s.same;
        counts.a01 = s.sameDetected - s.same;
        counts.a00 = choose2(universe) - counts.a11 - counts.a10 - counts.a01;
    } else {
        const auto complete = complete_with_singletons(ground);
        const std::size_t labelBound =
            detectedLabels.empty() ? 0 : std::size_t{*std::max_element(detectedLabels.begin(), detectedLabels.end())} + 1;
        struct State {
            PartitionShard ground;
            std::vector<std::uint32_t> groundOf, detectedOf; // per member of ground.block
            std::vector<std::uint64_t> histogram;
        };
        auto partials = detail::execute(
            cfg, backend,
            [&](std::size_t p) {
                State s{shard(complete, w, p), {}, {}, {}};
                for (std::size_t i = 0; i < s.ground.block.size(); ++i)
                    for (NodeId v : s.ground.block.members_of(i)) {
                        s.groundOf.push_back(s.ground.block.ids[i]);
                        s.detectedOf.push_back(detectedLabels[v]);
                    }
                if (!enumerate) s.histogram.assign(labelBound, 0);
                return s;
            },
            [&](State &s, parallel::WorkerContext &ctx) {
                PairCounts acc = ctx.compute([&] {
                    if (enumerate) return detail::count_pair_rows(s.groundOf, s.detectedOf, 0, 1);
                    return detail::count_local_pairs_contingency(s.ground.block, s.detectedOf, s.histogram);
                });
                parallel::RingMessage own;
                own.kind = parallel::PayloadKind::LabeledCommunities;
                own.block = s.ground.block;
                own.labels = s.detectedOf;
                std::vector<std::uint32_t> remoteGround;
                ctx.circulate("ground-map", std::move(own), [&](const parallel::RingMessage &m) {
                    if (enumerate) {
                        remoteGround.clear();
                        for (std::size_t i = 0; i < m.block.size(); ++i)
                            remoteGround.insert(remoteGround.end(), m.block.members_of(i).size(), m.block.ids[i]);
                        detail::count_remote_pairs_enumerate(acc, s.groundOf, s.detectedOf, remoteGround, m.labels);
                    } else {
                        detail::count_remote_pairs_sweep(acc, s.ground.block, s.detectedOf, m.block, m.labels,
                                                         s.histogram);
                    }
                });
                return acc;
            },
            out.report);
        for (const auto &p : partials) counts += p;
    }

    out.value.counts = counts;
    out.value.indices = pair_indices(counts);
    return out;
}

// ---------------------------------------------------------------------------
// Q, Qds and per-community measures

namespace detail {

struct IntrinsicPartial {
    std::vector<CommunityMeasures> rows;
    double modularity = 0.0;
    double modularityDensity = 0.0;
};

inline IntrinsicPartial intrinsic_partial(std::span<const CommunityStats> stats, std::uint64_t edges) {
    IntrinsicPartial part;
    part.rows.reserve(stats.size());
    for (const auto &s : stats) {
        part.rows.push_back(community_measures(s, edges));
        part.modularity += part.rows.back().modularity;
        part.modularityDensity += part.rows.back().modularityDensity;
    }
    return part;
}

} // namespace detail

/// Communities are evaluated independently, so workers never exchange
/// messages; the ring backend gives each worker only its local subgraph.
inline Run<IntrinsicReport> run_intrinsic_metrics(const Network &net, const Partition &p, const BackendConfig &cfg) {
    if (p.universe_size() != net.node_count())
        throw std::invalid_argument("partition universe does not match network size");
    require_edges(net.edge_count());
    const Backend backend = cfg.effective_backend();
    const std::size_t w = backend == Backend::Sequential ? 1 : cfg.numWorkers;
    const std::uint64_t edges = net.edge_count();
    const auto labels = to_node_map(p);
    const auto sizes = p.sizes();
    Run<IntrinsicReport> out;

    struct State {
        PartitionShard communities;
        Network local;
        NodeCommunityMap labels; // ring only: private copy
    };
    auto partials = detail::execute(
        cfg, backend,
        [&](std::size_t id) {
            State s{shard(p, w, id), {}, {}};
            if (backend == Backend::MessagePassing) {
                s.local = local_subgraph(net, s.communities);
                s.labels = labels;
            }
            return s;
        },
        [&](State &s, parallel::WorkerContext &ctx) {
            return ctx.compute([&] {
                const bool ring = backend == Backend::MessagePassing;
                const auto stats =
                    community_stats(ring ? s.local : net, s.communities.block, ring ? s.labels : labels, sizes);
                return detail::intrinsic_partial(stats, edges);
            });
        },
        out.report);

    auto &r = out.value;
    r.edgeCount = edges;
    r.unassignedNodes = p.universe_size() - p.covered_count();
    for (auto &part : partials) {
        r.modularity += part.modularity;
        r.modularityDensity += part.modularityDensity;
        std::move(part.rows.begin(), part.rows.end(), std::back_inserter(r.rows));
    }
    std::sort(r.rows.begin(), r.rows.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
    summarize_rows(r);
    return out;
}

} // namespace cqt
