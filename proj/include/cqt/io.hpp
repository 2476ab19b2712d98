#pragma once

// Text formats:
//   edge list       "u v" per line, '#' starts a comment line, blank lines ignored
//   community file  one community per line, whitespace-separated node ids
// Both are what common LFR generators emit.

#include <charconv>
#include <initializer_list>
#include <span>
#include <cstdint>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cqt/graph.hpp"

namespace cqt {

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

/// Calls fn(lineNumber, tokens) for every non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::istream &in, Fn &&fn) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::string_view rest(text);
    std::vector<std::uint64_t> tokens;
    std::size_t lineNo = 0;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest.remove_prefix(nl == std::string_view::npos ? rest.size() : nl + 1);
        ++lineNo;

        std::size_t i = 0;
        while (i < line.size() && is_space(line[i])) ++i;
        if (i == line.size() || line[i] == '#') continue;

        tokens.clear();
        while (i < line.size()) {
            std::size_t j = i;
            while (j < line.size() && !is_space(line[j])) ++j;
            std::string_view tok = line.substr(i, j - i);
            std::uint64_t value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size())
                throw ParseError("expected a non-negative integer node id, got '" + std::string(tok) + "'",
                                 lineNo);
            tokens.push_back(value);
            i = j;
            while (i < line.size() && is_space(line[i])) ++i;
        }
        fn(lineNo, std::span<const std::uint64_t>(tokens));
    }
}

} // namespace detail

struct LoadedNetwork {
    Network network;
    NodeIndex index;
    EdgeCleanup cleanup;
};

inline LoadedNetwork load_edge_list(std::istream &in) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    detail::for_each_record(in, [&](std::size_t line, std::span<const std::uint64_t> tok) {
        if (tok.size() != 2)
            throw ParseError("expected two node ids, got " + std::to_string(tok.size()), line);
        raw.emplace_back(tok[0], tok[1]);
    });
    if (raw.empty()) throw ParseError("edge list contains no edges", 0);

    std::vector<std::uint64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [u, v] : raw) {
        ids.push_back(u);
        ids.push_back(v);
    }
    LoadedNetwork out;
    out.index = NodeIndex::from_ids(std::move(ids));

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) edges.emplace_back(*out.index.find(u), *out.index.find(v));
    raw.clear();
    raw.shrink_to_fit();
    out.network = Network::from_edges(out.index.size(), std::move(edges), &out.cleanup);
    return out;
}

/// A community file before id translation: communities of external ids in
/// file order, with the source line of each.
struct CommunityLists {
    std::vector<std::vector<std::uint64_t>> communities;
    std::vector<std::size_t> lines;
};

inline CommunityLists read_community_lists(std::istream &in) {
    CommunityLists out;
    detail::for_each_record(in, [&](std::size_t line, std::span<const std::uint64_t> tok) {
        out.communities.emplace_back(tok.begin(), tok.end());
        out.lines.push_back(line);
    });
    return out;
}

/// Translates external ids through `index`; ids missing from it, or whose
/// dense id is not below `universe`, raise RangeError.
inline Partition make_partition(const CommunityLists &lists, const NodeIndex &index, std::size_t universe) {
    std::vector<std::vector<NodeId>> groups;
    groups.reserve(lists.communities.size());
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t k = 0; k < lists.communities.size(); ++k) {
        std::vector<NodeId> group;
        group.reserve(lists.communities[k].size());
        for (std::uint64_t ext : lists.communities[k]) {
            if (!seen.insert(ext).second) throw OverlapError(ext);
            auto dense = index.find(ext);
            if (!dense || *dense >= universe)
                throw RangeError("line " + std::to_string(lists.lines[k]) + ": node " + std::to_string(ext) +
                                 " outside universe of size " + std::to_string(universe));
            group.push_back(*dense);
        }
        groups.push_back(std::move(group));
    }
    return Partition(groups, universe);
}

inline NodeIndex index_of(std::initializer_list<const CommunityLists *> sources) {
    std::vector<std::uint64_t> ids;
    for (const auto *src : sources)
        for (const auto &c : src->communities) ids.insert(ids.end(), c.begin(), c.end());
    return NodeIndex::from_ids(std::move(ids));
}

/// Loads a community file on its own: the file's distinct ids are re-indexed
/// densely in ascending order, and must fit in `universe`.
inline Partition load_communities(std::istream &in, std::size_t universe) {
    auto lists = read_community_lists(in);
    return make_partition(lists, index_of({&lists}), universe);
}

/// Loads a community file whose ids refer to an existing index (e.g. a network's).
inline Partition load_communities(std::istream &in, const NodeIndex &index, std::size_t universe) {
    return make_partition(read_community_lists(in), index, universe);
}

inline void write_edge_list(std::ostream &out, const Network &n, const NodeIndex *index = nullptr) {
    for (NodeId u = 0; u < n.node_count(); ++u)
        for (NodeId v : n.neighbors(u))
            if (u < v) {
                if (index)
                    out << index->external(u) << ' ' << index->external(v) << '\n';
                else
                    out << u << ' ' << v << '\n';
            }
}

inline void write_communities(std::ostream &out, const Partition &p, const NodeIndex *index = nullptr) {
    for (CommunityId c = 0; c < p.community_count(); ++c) {
        bool first = true;
        for (NodeId v : p.members(c)) {
            if (!first) out << ' ';
            first = false;
            if (index)
                out << index->external(v);
            else
                out << v;
        }
        out << '\n';
    }
}

} // namespace cqt
