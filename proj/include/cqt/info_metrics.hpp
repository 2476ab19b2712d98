#pragma once

// Variation of information and normalized mutual information.
// All logarithms are natural; VI is reported in nats.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqt/contingency.hpp"

namespace cqt {

struct InfoMetrics {
    double vi = 0.0;
    double nmi = 0.0;
    /// Both entropies were zero and NMI was reported as 1 by convention.
    bool nmiDegenerate = false;
};

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

/// Unnormalised sums behind VI and NMI. Partial accumulators from disjoint
/// sets of overlaps and communities merge by addition.
struct InfoAccumulator {
    double viSum = 0.0;      // Σ n log(n² / (|c||c'|))
    double mutualSum = 0.0;  // Σ n log(n|V| / (|c||c'|))
    double entropySum = 0.0; // Σ |c| log(|c|/|V|) over both partitions

    void add_overlap(std::uint64_t n, std::uint64_t groundSize, std::uint64_t detectedSize, std::size_t universe) {
        const double dn = static_cast<double>(n);
        const double ab = static_cast<double>(groundSize) * static_cast<double>(detectedSize);
        viSum += dn * std::log(dn * dn / ab);
        mutualSum += dn * std::log(dn * static_cast<double>(universe) / ab);
    }

    void add_community(std::uint64_t size, std::size_t universe) {
        const double ds = static_cast<double>(size);
        entropySum += ds * std::log(ds / static_cast<double>(universe));
    }

    InfoAccumulator &operator+=(const InfoAccumulator &o) {
        viSum += o.viSum;
        mutualSum += o.mutualSum;
        entropySum += o.entropySum;
        return *this;
    }

    InfoMetrics finish(std::size_t universe) const {
        if (universe == 0) throw std::invalid_argument("universe size is zero");
        InfoMetrics m;
        m.vi = std::max(0.0, -viSum / static_cast<double>(universe));
        if (entropySum == 0.0) {
            m.nmi = 1.0;
            m.nmiDegenerate = true;
        } else {
            m.nmi = -2.0 * mutualSum / entropySum;
        }
        return m;
    }
};

inline InfoAccumulator accumulate_info(const ContingencyTable &t) {
    if (t.universe == 0) throw std::invalid_argument("universe size is zero");
    InfoAccumulator total;
    // per-row partials keep the error growth bounded for very many rows
    std::size_t i = 0;
    while (i < t.cells.size()) {
        InfoAccumulator row;
        const CommunityId r = t.cells[i].row;
        for (; i < t.cells.size() && t.cells[i].row == r; ++i)
            row.add_overlap(t.cells[i].count, t.rowSizes[r], t.colSizes[t.cells[i].col], t.universe);
        total += row;
    }
    InfoAccumulator sizes;
    for (auto s : t.rowSizes) sizes.add_community(s, t.universe);
    for (auto s : t.colSizes) sizes.add_community(s, t.universe);
    total += sizes;
    return total;
}

inline double variation_of_information(const ContingencyTable &t) { return accumulate_info(t).finish(t.universe).vi; }

/// Returns 1 when both entropies vanish (0/0), see InfoMetrics::nmiDegenerate.
inline double normalized_mutual_information(const ContingencyTable &t) {
    return accumulate_info(t).finish(t.universe).nmi;
}

inline InfoMetrics info_metrics(const ContingencyTable &t) { return accumulate_info(t).finish(t.universe); }

} // namespace cqt
