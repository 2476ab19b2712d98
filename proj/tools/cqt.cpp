// cqt: community quality metrics from the command line.
//
//   cqt compare  --ground-truth G --detected D [--universe N]
//   cqt quality  --network E --communities C
//   cqt bench    [--family F]... [--workers 1,2,4] [--out results.csv]
//   cqt generate --nodes N --out PREFIX
//
// Exit status: 0 success, 1 computation error, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cqt/bench.hpp"
#include "cqt/cqt.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kComputeError = 1;
constexpr int kInputError = 2;

/// Bad input files or flag values; reported with exit status 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

/// Runs fn, turning loader failures into InputError tagged with the path.
template <typename Fn>
auto load(const std::string &path, Fn &&fn) {
    try {
        auto in = open_input(path);
        return fn(in);
    } catch (const InputError &) {
        throw;
    } catch (const std::exception &e) {
        throw InputError(path + ": " + e.what());
    }
}

struct Common {
    std::string backend = "seq";
    std::size_t workers = 1;
    bool csv = false;
    std::string out;
};

cqt::BackendConfig backend_config(const Common &c) {
    cqt::BackendConfig cfg;
    cfg.backend = cqt::parse_backend(c.backend);
    cfg.numWorkers = c.workers;
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    return s.str();
}

/// Writes to --out if given, else stdout. Output files are only created once
/// the report is complete.
void emit(const Common &c, const std::string &report) {
    if (c.out.empty()) {
        std::cout << report;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InputError("cannot write '" + c.out + "'");
    f << report;
}

// ---------------------------------------------------------------------------

struct MetricLine {
    std::string name;
    std::optional<double> value;
    std::string error;
};

struct FamilyOutcome {
    std::string family;
    std::vector<MetricLine> lines;
    double seconds = 0.0;
    std::string error;
};

template <typename Fn>
FamilyOutcome run_family(const std::string &family, std::vector<std::string> names, Fn &&fn) {
    FamilyOutcome out{family, {}, 0.0, {}};
    try {
        auto [values, seconds] = fn();
        for (std::size_t i = 0; i < names.size(); ++i) out.lines.push_back({names[i], values[i], {}});
        out.seconds = seconds;
    } catch (const std::exception &e) {
        out.error = e.what();
        for (auto &n : names) out.lines.push_back({n, std::nullopt, e.what()});
    }
    return out;
}

struct CompareArgs {
    Common common;
    std::string groundPath, detectedPath;
    std::size_t universe = 0;
};

int cmd_compare(const CompareArgs &a) {
    auto ground = load(a.groundPath, [](std::istream &in) { return cqt::read_community_lists(in); });
    auto detected = load(a.detectedPath, [](std::istream &in) { return cqt::read_community_lists(in); });
    const auto index = cqt::index_of({&ground, &detected});
    if (a.universe && a.universe < index.size())
        throw InputError("--universe " + std::to_string(a.universe) + " is smaller than the " +
                         std::to_string(index.size()) + " distinct node ids in the inputs");
    const std::size_t universe = a.universe ? a.universe : index.size();
    if (universe == 0) throw InputError("community files contain no nodes");
    auto build = [&](const cqt::CommunityLists &lists, const std::string &path) {
        try {
            return cqt::make_partition(lists, index, universe);
        } catch (const std::exception &e) {
            throw InputError(path + ": " + e.what());
        }
    };
    const auto g = build(ground, a.groundPath);
    const auto d = build(detected, a.detectedPath);
    cqt::BackendConfig cfg = backend_config(a.common);

    std::vector<std::string> notes;
    std::vector<FamilyOutcome> families;
    families.push_back(run_family("info", {"VI", "NMI"}, [&] {
        auto r = cqt::run_info_metrics(g, d, cfg);
        if (r.value.nmiDegenerate) notes.push_back("NMI: both partitions have zero entropy; reported as 1");
        return std::pair{std::vector<double>{r.value.vi, r.value.nmi}, r.report.timing.maxTotal};
    }));
    families.push_back(run_family("matching", {"F-measure", "NVD"}, [&] {
        auto r = cqt::run_matching_metrics(g, d, cfg);
        return std::pair{std::vector<double>{r.value.fMeasure, r.value.nvd}, r.report.timing.maxTotal};
    }));
    families.push_back(run_family("pair", {"RI", "ARI", "JI"}, [&] {
        auto r = cqt::run_pair_metrics(g, d, cfg);
        const auto &ix = r.value.indices;
        if (ix.ariDegenerate) notes.push_back("ARI: zero denominator with identical pair structure; reported as 1");
        if (ix.jiDegenerate) notes.push_back("JI: no co-membership pairs in either partition; reported as 1");
        return std::pair{std::vector<double>{ix.ri, ix.ari, ix.ji}, r.report.timing.maxTotal};
    }));
    if (g.covered_count() < universe || d.covered_count() < universe)
        notes.push_back(std::to_string(universe - g.covered_count()) + " ground-truth and " +
                        std::to_string(universe - d.covered_count()) +
                        " detected nodes are in no community; pair counts treat them as singletons");

    const auto effective = cqt::to_string(cfg.effective_backend());
    std::ostringstream r;
    bool failed = false;
    if (a.common.csv) {
        r << "family,metric,value,seconds\n";
        for (const auto &f : families)
            for (const auto &l : f.lines) {
                r << f.family << ',' << l.name << ',';
                if (l.value)
                    r << std::setprecision(17) << *l.value << ',' << f.seconds << '\n';
                else
                    r << "error,\n";
            }
        for (const auto &n : notes) std::cerr << "note: " << n << '\n';
    } else {
        r << "backend " << effective << ", workers " << cfg.numWorkers << ", universe " << universe << '\n';
        for (const auto &f : families) {
            for (const auto &l : f.lines) {
                r << "  " << std::left << std::setw(10) << l.name << ' ';
                if (l.value)
                    r << std::right << std::setw(10) << fmt(*l.value) << '\n';
                else
                    r << "     error  (" << l.error << ")\n";
            }
        }
        r << "seconds";
        for (const auto &f : families) r << "  " << f.family << ' ' << (f.error.empty() ? fmt(f.seconds) : "-");
        r << '\n';
        for (const auto &n : notes) r << "note: " << n << '\n';
    }
    for (const auto &f : families)
        if (!f.error.empty()) {
            failed = true;
            std::cerr << "error: " << f.family << " metrics failed: " << f.error << '\n';
        }
    emit(a.common, r.str());
    return failed ? kComputeError : kOk;
}

// ---------------------------------------------------------------------------

struct QualityArgs {
    Common common;
    std::string networkPath, communitiesPath;
};

int cmd_quality(const QualityArgs &a) {
    auto net = load(a.networkPath, [](std::istream &in) { return cqt::load_edge_list(in); });
    const std::size_t n = net.network.node_count();
    auto p = load(a.communitiesPath,
                  [&](std::istream &in) { return cqt::load_communities(in, net.index, n); });
    cqt::BackendConfig cfg = backend_config(a.common);
    auto run = cqt::run_intrinsic_metrics(net.network, p, cfg);
    const auto &q = run.value;

    std::vector<std::string> notes;
    if (net.cleanup.duplicates || net.cleanup.selfLoops)
        notes.push_back("removed " + std::to_string(net.cleanup.duplicates) + " duplicate edges and " +
                        std::to_string(net.cleanup.selfLoops) + " self-loops");
    if (q.unassignedNodes)
        notes.push_back(std::to_string(q.unassignedNodes) + " nodes are in no community");
    if (q.singletonCommunities)
        notes.push_back(std::to_string(q.singletonCommunities) +
                        " singleton communities: intra-density taken as 0");
    if (q.isolatedCommunities)
        notes.push_back(std::to_string(q.isolatedCommunities) +
                        " communities have no incident edges: conductance taken as 0");

    std::ostringstream r;
    if (a.common.csv) {
        r << std::setprecision(17);
        r << "metric,value\n"
          << "Q," << q.modularity << "\nQds," << q.modularityDensity << "\nintra_edges_mean," << q.means.intraEdges
          << "\nintra_density_mean," << q.means.intraDensity << "\ncontraction_mean," << q.means.contraction
          << "\ninter_edges_mean," << q.means.interEdges << "\nexpansion_mean," << q.means.expansion
          << "\nconductance_mean," << q.means.conductance << "\n\n";
        r << "community,size,intra_edges,intra_density,contraction,inter_edges,expansion,conductance\n";
        for (const auto &m : q.rows)
            r << m.id << ',' << m.size << ',' << m.intraEdges << ',' << m.intraDensity << ','
              << m.contraction << ',' << m.interEdges << ',' << m.expansion << ',' << m.conductance << '\n';
        for (const auto &note : notes) std::cerr << "note: " << note << '\n';
    } else {
        r << "backend " << cqt::to_string(cfg.effective_backend()) << ", workers " << cfg.numWorkers << ", nodes "
          << n << ", edges " << q.edgeCount << ", communities " << q.communityCount << '\n';
        r << "  Q          " << std::setw(10) << fmt(q.modularity) << '\n';
        r << "  Qds        " << std::setw(10) << fmt(q.modularityDensity) << '\n';
        r << "seconds " << fmt(run.report.timing.maxTotal) << ", message bytes " << run.report.transport.bytes
          << '\n';
        r << '\n'
          << std::setw(10) << "community" << std::setw(8) << "size" << std::setw(12) << "intra" << std::setw(12)
          << "density" << std::setw(12) << "contract" << std::setw(12) << "inter" << std::setw(12) << "expansion"
          << std::setw(12) << "conduct" << '\n';
        auto row = [&](const std::string &label, const std::string &size, double intra, double dens, double con,
                       double inter, double exp, double cond) {
            r << std::setw(10) << label << std::setw(8) << size << std::setw(12) << fmt(intra) << std::setw(12)
              << fmt(dens) << std::setw(12) << fmt(con) << std::setw(12) << fmt(inter) << std::setw(12) << fmt(exp)
              << std::setw(12) << fmt(cond) << '\n';
        };
        for (const auto &m : q.rows)
            row(std::to_string(m.id), std::to_string(m.size), static_cast<double>(m.intraEdges),
                m.intraDensity, m.contraction, static_cast<double>(m.interEdges), m.expansion, m.conductance);
        row("mean", "", q.means.intraEdges, q.means.intraDensity, q.means.contraction, q.means.interEdges,
            q.means.expansion, q.means.conductance);
        for (const auto &note : notes) r << "note: " << note << '\n';
    }
    emit(a.common, r.str());
    return kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string backend = "shm";
    std::vector<std::size_t> workers{1, 2, 4};
    std::vector<std::string> families{"info", "matching", "pair", "intrinsic"};
    std::size_t nodes = 100000;
    std::size_t intrinsicNodes = 1000000;
    std::size_t repetitions = 3;
    double perturb = 0.2;
    std::uint64_t seed = 1;
    std::string networkPath, groundPath, detectedPath;
    std::string out;
};

int cmd_bench(const BenchArgs &a) {
    std::vector<cqt::MetricFamily> extrinsic, intrinsic;
    for (const auto &name : a.families) {
        cqt::MetricFamily f;
        try {
            f = cqt::parse_family(name);
        } catch (const std::exception &e) {
            throw InputError(e.what());
        }
        (f == cqt::MetricFamily::Intrinsic ? intrinsic : extrinsic).push_back(f);
    }
    cqt::Backend backend;
    try {
        backend = cqt::parse_backend(a.backend);
    } catch (const std::exception &e) {
        throw InputError(e.what());
    }
    if (a.workers.empty() || a.workers.front() != 1 || !std::is_sorted(a.workers.begin(), a.workers.end()) ||
        std::adjacent_find(a.workers.begin(), a.workers.end()) != a.workers.end())
        throw InputError("--workers must be strictly ascending and start at 1");
    const bool fromFiles = !a.groundPath.empty() || !a.networkPath.empty();

    auto generated = [&](std::size_t n) {
        cqt::GeneratorParams gp;
        gp.nodeCount = n;
        gp.seed = a.seed;
        auto g = cqt::generate_network(gp);
        auto detected = cqt::perturb_partition(g.communities, a.perturb, a.seed + 1);
        return cqt::StudyInputs{std::move(g.network), std::move(g.communities), std::move(detected)};
    };

    cqt::ScalingResult all;
    if (!extrinsic.empty()) {
        cqt::StudyTask task{extrinsic, backend, [&] {
                                if (!fromFiles) return generated(a.nodes);
                                if (a.groundPath.empty() || a.detectedPath.empty())
                                    throw InputError("--ground-truth and --detected are both needed");
                                auto gl = load(a.groundPath, [](std::istream &in) { return cqt::read_community_lists(in); });
                                auto dl = load(a.detectedPath, [](std::istream &in) { return cqt::read_community_lists(in); });
                                auto index = cqt::index_of({&gl, &dl});
                                return cqt::StudyInputs{{}, cqt::make_partition(gl, index, index.size()),
                                                        cqt::make_partition(dl, index, index.size())};
                            }};
        auto r = cqt::run_scaling_study(task, a.workers, a.repetitions);
        std::cerr << "ground-truth study inputs ready in " << fmt(r.loadSeconds) << " s (not timed)\n";
        all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    }
    if (!intrinsic.empty()) {
        cqt::StudyTask task{intrinsic, backend, [&] {
                                if (!fromFiles) return generated(a.intrinsicNodes);
                                if (a.networkPath.empty() || a.groundPath.empty())
                                    throw InputError("--network and --ground-truth are both needed");
                                auto net = load(a.networkPath, [](std::istream &in) { return cqt::load_edge_list(in); });
                                auto p = load(a.groundPath, [&](std::istream &in) {
                                    return cqt::load_communities(in, net.index, net.network.node_count());
                                });
                                return cqt::StudyInputs{std::move(net.network), std::move(p), {}};
                            }};
        auto r = cqt::run_scaling_study(task, a.workers, a.repetitions);
        std::cerr << "intrinsic study inputs ready in " << fmt(r.loadSeconds) << " s (not timed)\n";
        all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    }

    std::ostringstream csv;
    cqt::write_scaling_csv(csv, all);
    Common c;
    c.out = a.out;
    emit(c, csv.str());
    return kOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    cqt::GeneratorParams params;
    std::string prefix;
};

int cmd_generate(const GenerateArgs &a) {
    cqt::GeneratedNetwork g;
    try {
        g = cqt::generate_network(a.params);
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    std::ostringstream edges, communities;
    cqt::write_edge_list(edges, g.network);
    cqt::write_communities(communities, g.communities);
    for (const auto &[suffix, text] : {std::pair{".edges", edges.str()}, std::pair{".cmty", communities.str()}}) {
        std::ofstream f(a.prefix + suffix);
        if (!f) throw InputError("cannot write '" + a.prefix + suffix + "'");
        f << text;
    }

    const auto stats = cqt::community_stats(g.network, g.communities);
    std::uint64_t boundary = 0, volume = 0;
    for (const auto &s : stats) {
        boundary += s.outEdges;
        volume += 2 * s.inEdges + s.outEdges;
    }
    std::cout << "nodes " << g.network.node_count() << ", edges " << g.network.edge_count() << ", mean degree "
              << fmt(2.0 * static_cast<double>(g.network.edge_count()) / static_cast<double>(g.network.node_count()))
              << ", communities " << g.communities.community_count() << ", mixing "
              << fmt(volume ? static_cast<double>(boundary) / static_cast<double>(volume) : 0.0)
              << ", unmatched stubs " << g.droppedStubs << '\n';
    std::cout << "wrote " << a.prefix << ".edges and " << a.prefix << ".cmty\n";
    return kOk;
}

void add_common(CLI::App *cmd, Common &c) {
    cmd->add_option("--backend", c.backend, "seq, shm or ring")->check(CLI::IsMember({"seq", "shm", "ring"}));
    cmd->add_option("--workers", c.workers, "worker count")->check(CLI::PositiveNumber);
    cmd->add_flag("--csv", c.csv, "machine-readable output");
    cmd->add_option("--out", c.out, "write the report here instead of stdout");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Community quality metrics"};
    app.require_subcommand(1);

    CompareArgs compare;
    auto *cmp = app.add_subcommand("compare", "compare a detected partition against ground truth");
    cmp->add_option("--ground-truth", compare.groundPath, "ground-truth community file")->required();
    cmp->add_option("--detected", compare.detectedPath, "detected community file")->required();
    cmp->add_option("--universe", compare.universe, "node count |V| (default: distinct ids in both files)");
    add_common(cmp, compare.common);

    QualityArgs quality;
    auto *qual = app.add_subcommand("quality", "intrinsic quality of a partition of a network");
    qual->add_option("--network", quality.networkPath, "edge list")->required();
    qual->add_option("--communities,--detected", quality.communitiesPath, "community file")->required();
    add_common(qual, quality.common);

    BenchArgs bench;
    auto *bch = app.add_subcommand("bench", "scaling study; writes CSV");
    bch->add_option("--family", bench.families, "info, matching, pair, pair-bruteforce, intrinsic")
        ->delimiter(',');
    bch->add_option("--backend", bench.backend, "shm or ring")->check(CLI::IsMember({"seq", "shm", "ring"}));
    bch->add_option("--workers", bench.workers, "ascending worker counts starting at 1")->delimiter(',');
    bch->add_option("--nodes", bench.nodes, "generated network size for ground-truth families");
    bch->add_option("--intrinsic-nodes", bench.intrinsicNodes, "generated network size for the intrinsic family");
    bch->add_option("--repetitions", bench.repetitions, "runs per row; the median is kept")->check(CLI::PositiveNumber);
    bch->add_option("--perturb", bench.perturb, "fraction of nodes moved to make the detected partition");
    bch->add_option("--seed", bench.seed);
    bch->add_option("--network", bench.networkPath, "use this network instead of a generated one");
    bch->add_option("--ground-truth", bench.groundPath);
    bch->add_option("--detected", bench.detectedPath);
    bch->add_option("--out", bench.out, "CSV path (default stdout)");

    GenerateArgs gen;
    auto *g = app.add_subcommand("generate", "planted-partition network");
    g->add_option("--nodes", gen.params.nodeCount)->required();
    g->add_option("--avg-degree", gen.params.avgDegree);
    g->add_option("--max-degree", gen.params.maxDegree);
    g->add_option("--mixing", gen.params.mixing);
    g->add_option("--min-community", gen.params.minCommunity);
    g->add_option("--max-community", gen.params.maxCommunity);
    g->add_option("--seed", gen.params.seed);
    g->add_option("--out", gen.prefix, "writes PREFIX.edges and PREFIX.cmty")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*cmp) return cmd_compare(compare);
        if (*qual) return cmd_quality(quality);
        if (*bch) return cmd_bench(bench);
        if (*g) return cmd_generate(gen);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kComputeError;
    }
    return kInputError;
}
