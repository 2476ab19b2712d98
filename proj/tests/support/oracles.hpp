#pragma once

// Reference implementations for tests. Deliberately naive: dense loops,
// textbook formulas, nothing shared with the library beyond the input types.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "cqt/graph.hpp"

namespace oracle {

/// Node labels; -1 = in no community.
using Labels = std::vector<long>;

inline Labels labels_of(const cqt::Partition &p) {
    Labels out(p.universe_size(), -1);
    for (cqt::CommunityId c = 0; c < p.community_count(); ++c)
        for (auto v : p.members(c)) out[v] = static_cast<long>(c);
    return out;
}

/// Unassigned nodes become singletons with fresh labels.
inline Labels completed(Labels l) {
    long next = 0;
    for (long x : l) next = std::max(next, x + 1);
    for (long &x : l)
        if (x < 0) x = next++;
    return l;
}

inline cqt::Partition partition_of(const Labels &l) {
    std::map<long, std::vector<cqt::NodeId>> groups;
    for (std::size_t v = 0; v < l.size(); ++v)
        if (l[v] >= 0) groups[l[v]].push_back(static_cast<cqt::NodeId>(v));
    std::vector<std::vector<cqt::NodeId>> out;
    for (auto &[label, members] : groups) out.push_back(members);
    return cqt::Partition(out, l.size());
}

struct Counts {
    std::uint64_t a11 = 0, a10 = 0, a01 = 0, a00 = 0;
};

inline Counts pair_counts(const Labels &g0, const Labels &d0) {
    const auto g = completed(g0), d = completed(d0);
    Counts c;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const bool sg = g[i] == g[j], sd = d[i] == d[j];
            if (sg && sd) ++c.a11;
            else if (sg) ++c.a10;
            else if (sd) ++c.a01;
            else ++c.a00;
        }
    return c;
}

struct Table {
    std::map<std::pair<long, long>, double> cell;
    std::map<long, double> row, col;
    double n = 0;
};

/// Overlaps over covered nodes only; a node missing from either side is skipped.
inline Table table(const Labels &g, const Labels &d) {
    Table t;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (g[v] >= 0) t.row[g[v]] += 1;
        if (d[v] >= 0) t.col[d[v]] += 1;
        if (g[v] >= 0 && d[v] >= 0) t.cell[{g[v], d[v]}] += 1;
    }
    t.n = static_cast<double>(g.size());
    return t;
}

inline double entropy(const std::map<long, double> &sizes, double n) {
    double h = 0;
    for (auto &[k, s] : sizes) h -= s / n * std::log(s / n);
    return h;
}

inline double mutual_information(const Table &t) {
    double i = 0;
    for (auto &[k, nij] : t.cell) {
        const double a = t.row.at(k.first), b = t.col.at(k.second);
        i += nij / t.n * std::log(nij * t.n / (a * b));
    }
    return i;
}

/// H(C) + H(C') - 2 I(C, C').
inline double vi(const Labels &g, const Labels &d) {
    const auto t = table(g, d);
    return entropy(t.row, t.n) + entropy(t.col, t.n) - 2 * mutual_information(t);
}

inline double nmi(const Labels &g, const Labels &d) {
    const auto t = table(g, d);
    const double h = entropy(t.row, t.n) + entropy(t.col, t.n);
    return h == 0 ? 1.0 : 2 * mutual_information(t) / h;
}

inline double f_measure(const Labels &g, const Labels &d) {
    const auto t = table(g, d);
    double sum = 0;
    for (auto &[c, size] : t.row) {
        double best = 0;
        for (auto &[c2, size2] : t.col) {
            auto it = t.cell.find({c, c2});
            const double n = it == t.cell.end() ? 0 : it->second;
            best = std::max(best, 2 * n / (size + size2));
        }
        sum += size * best;
    }
    return sum / t.n;
}

inline double nvd(const Labels &g, const Labels &d) {
    const auto t = table(g, d);
    double s = 0;
    for (auto &[c, size] : t.row) {
        double best = 0;
        for (auto &[k, n] : t.cell)
            if (k.first == c) best = std::max(best, n);
        s += best;
    }
    for (auto &[c, size] : t.col) {
        double best = 0;
        for (auto &[k, n] : t.cell)
            if (k.second == c) best = std::max(best, n);
        s += best;
    }
    return 1 - s / (2 * t.n);
}

inline double rand_index(const Counts &c) {
    return double(c.a11 + c.a00) / double(c.a11 + c.a10 + c.a01 + c.a00);
}

/// Hubert-Arabie form from pair counts.
inline double ari(const Counts &c) {
    const double total = double(c.a11 + c.a10 + c.a01 + c.a00);
    const double rows = double(c.a11 + c.a10), cols = double(c.a11 + c.a01);
    const double expected = rows * cols / total;
    const double top = (rows + cols) / 2;
    if (top == expected) return 1.0;
    return (double(c.a11) - expected) / (top - expected);
}

inline double jaccard(const Counts &c) {
    const double den = double(c.a11 + c.a10 + c.a01);
    return den == 0 ? 1.0 : double(c.a11) / den;
}

// ---------------------------------------------------------------------------
// intrinsic measures from a dense adjacency matrix

struct Dense {
    std::size_t n = 0;
    std::vector<std::vector<int>> a;
    double m = 0;
};

inline Dense dense(const cqt::Network &net) {
    Dense d;
    d.n = net.node_count();
    d.a.assign(d.n, std::vector<int>(d.n, 0));
    for (cqt::NodeId u = 0; u < d.n; ++u)
        for (auto v : net.neighbors(u)) d.a[u][v] = 1;
    for (std::size_t u = 0; u < d.n; ++u)
        for (std::size_t v = u + 1; v < d.n; ++v) d.m += d.a[u][v];
    return d;
}

/// Q = 1/(2m) Σ_ij (A_ij - k_i k_j / 2m) δ(c_i, c_j), unassigned nodes in no community.
inline double modularity(const Dense &g, const Labels &l) {
    std::vector<double> k(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) k[i] += g.a[i][j];
    double q = 0;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            if (l[i] >= 0 && l[i] == l[j]) q += g.a[i][j] - k[i] * k[j] / (2 * g.m);
    return q / (2 * g.m);
}

struct Community {
    double size = 0, in = 0, out = 0;
};

inline std::map<long, Community> communities(const Dense &g, const Labels &l) {
    std::map<long, Community> out;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (l[i] < 0) continue;
        auto &c = out[l[i]];
        c.size += 1;
        for (std::size_t j = 0; j < g.n; ++j) {
            if (!g.a[i][j]) continue;
            if (l[j] == l[i]) c.in += 0.5;
            else c.out += 1;
        }
    }
    return out;
}

inline double density(const Community &c) { return c.size < 2 ? 0.0 : 2 * c.in / (c.size * (c.size - 1)); }

/// Qds = Σ_c [ |E_in|/m d_c - ((2|E_in| + |E_out|)/(2m) d_c)^2
///             - Σ_{c' != c} |E_cc'|/(2m) * |E_cc'|/(|c||c'|) ]
inline double modularity_density(const Dense &g, const Labels &l) {
    const auto cs = communities(g, l);
    std::map<std::pair<long, long>, double> between;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            if (g.a[i][j] && l[i] >= 0 && l[j] >= 0 && l[i] != l[j]) between[{l[i], l[j]}] += 1;
    double q = 0;
    for (auto &[id, c] : cs) {
        const double d = density(c);
        const double share = (2 * c.in + c.out) / (2 * g.m) * d;
        q += c.in / g.m * d - share * share;
        for (auto &[key, e] : between)
            if (key.first == id) q -= e / (2 * g.m) * e / (c.size * cs.at(key.second).size);
    }
    return q;
}

// ---------------------------------------------------------------------------
// generators

/// Random labels for n nodes in up to k communities; with probability
/// `holes` a node is left unassigned.
inline Labels random_labels(std::mt19937_64 &rng, std::size_t n, std::size_t k, double holes = 0.0) {
    Labels l(n);
    std::uniform_int_distribution<long> pick(0, static_cast<long>(k) - 1);
    std::bernoulli_distribution hole(holes);
    for (auto &x : l) x = hole(rng) ? -1 : pick(rng);
    return l;
}

/// Random simple graph with edge probability p.
inline cqt::Network random_graph(std::mt19937_64 &rng, std::size_t n, double p) {
    std::bernoulli_distribution keep(p);
    std::vector<std::pair<cqt::NodeId, cqt::NodeId>> e;
    for (cqt::NodeId u = 0; u < n; ++u)
        for (cqt::NodeId v = u + 1; v < n; ++v)
            if (keep(rng)) e.emplace_back(u, v);
    return cqt::Network::from_edges(n, e);
}

} // namespace oracle
