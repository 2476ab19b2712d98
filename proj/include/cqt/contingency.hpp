#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cqt/graph.hpp"

namespace cqt {

/// Finds the overlap sizes between the communities of two blocks.
///
/// One block is indexed into a universe-sized slot table; members of the
/// other are probed against it. Cost is linear in the member counts of both
/// blocks. Reusable across calls; clear() only touches the slots it set.
class OverlapScanner {
public:
    explicit OverlapScanner(std::size_t universe) : slot_(universe, kNone) {}

    void index(const CommunityBlock &block) {
        clear();
        for (std::size_t i = 0; i < block.size(); ++i)
            for (NodeId v : block.members_of(i)) slot_[v] = static_cast<std::uint32_t>(i);
        indexed_ = &block;
        counts_.assign(block.size(), 0);
    }

    void clear() {
        if (indexed_)
            for (NodeId v : indexed_->members) slot_[v] = kNone;
        indexed_ = nullptr;
    }

    /// Calls fn(indexedPosition, overlap) for every indexed community sharing
    /// at least one node with `members`, in ascending position order.
    template <typename Fn>
    void scan(std::span<const NodeId> members, Fn &&fn) {
        touched_.clear();
        for (NodeId v : members) {
            std::uint32_t s = slot_[v];
            if (s == kNone) continue;
            if (counts_[s]++ == 0) touched_.push_back(s);
        }
        std::sort(touched_.begin(), touched_.end());
        for (std::uint32_t s : touched_) {
            fn(static_cast<std::size_t>(s), counts_[s]);
            counts_[s] = 0;
        }
    }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint32_t> slot_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint32_t> touched_;
    const CommunityBlock *indexed_ = nullptr;
};

/// Calls fn(scanPos, indexedPos, overlap) for every overlapping pair of communities.
template <typename Fn>
void for_each_overlap(OverlapScanner &scanner, const CommunityBlock &scanned, const CommunityBlock &indexed,
                      Fn &&fn) {
    scanner.index(indexed);
    for (std::size_t i = 0; i < scanned.size(); ++i)
        scanner.scan(scanned.members_of(i), [&](std::size_t j, std::uint64_t n) { fn(i, j, n); });
    scanner.clear();
}

inline CommunityBlock as_block(const Partition &p) {
    CommunityBlock b;
    b.ids.reserve(p.community_count());
    b.offsets.reserve(p.community_count() + 1);
    b.members.reserve(p.covered_count());
    for (CommunityId c = 0; c < p.community_count(); ++c) b.append(c, p.members(c));
    return b;
}

struct ContingencyCell {
    CommunityId row;
    CommunityId col;
    std::uint64_t count;

    friend bool operator==(const ContingencyCell &, const ContingencyCell &) = default;
};

/// Sparse overlap counts |c ∩ c'| between a ground-truth partition (rows)
/// and a detected partition (columns). Cells are sorted by (row, col) and
/// hold only positive counts.
struct ContingencyTable {
    std::vector<ContingencyCell> cells;
    std::vector<std::uint64_t> rowSizes;
    std::vector<std::uint64_t> colSizes;
    std::size_t universe = 0;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto &cell : cells) t += cell.count;
        return t;
    }

    ContingencyTable transposed() const {
        ContingencyTable t{{}, colSizes, rowSizes, universe};
        t.cells.reserve(cells.size());
        for (const auto &cell : cells) t.cells.push_back({cell.col, cell.row, cell.count});
        std::sort(t.cells.begin(), t.cells.end(),
                  [](const auto &a, const auto &b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
        return t;
    }
};

inline ContingencyTable build_contingency(const Partition &ground, const Partition &detected) {
    if (ground.universe_size() != detected.universe_size())
        throw std::invalid_argument("partitions are over different universes");
    ContingencyTable t;
    t.universe = ground.universe_size();
    for (auto s : ground.sizes()) t.rowSizes.push_back(s);
    for (auto s : detected.sizes()) t.colSizes.push_back(s);

    auto groundBlock = as_block(ground);
    auto detectedBlock = as_block(detected);
    OverlapScanner scanner(t.universe);
    for_each_overlap(scanner, groundBlock, detectedBlock, [&](std::size_t r, std::size_t c, std::uint64_t n) {
        t.cells.push_back({static_cast<CommunityId>(r), static_cast<CommunityId>(c), n});
    });
    return t;
}

} // namespace cqt
