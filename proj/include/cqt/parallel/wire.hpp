#pragma once

// Ring message wire format. All integers little-endian, fixed width.
//
//   u32 sender        worker that sent this copy
//   u32 origin        worker whose shard the payload is
//   u32 hopCount      forwards so far, 1 on the first send
//   u32 kind          1 = communities, 2 = communities with a label per member
//   u64 recordCount
//   recordCount x {
//     u64 communityId
//     u64 memberCount
//     u32 member[memberCount]
//     u32 label[memberCount]      (kind 2 only)
//   }

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cqt/graph.hpp"

namespace cqt::parallel {

enum class PayloadKind : std::uint32_t { Communities = 1, LabeledCommunities = 2 };

struct RingMessage {
    std::uint32_t senderId = 0;
    std::uint32_t originId = 0;
    std::uint32_t hopCount = 0;
    PayloadKind kind = PayloadKind::Communities;
    CommunityBlock block;
    /// One label per entry of block.members; LabeledCommunities only.
    std::vector<std::uint32_t> labels;

    friend bool operator==(const RingMessage &, const RingMessage &) = default;
};

class WireFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_u32(std::vector<std::byte> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

inline void put_u64(std::vector<std::byte> &out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

class Reader {
public:
    explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
    std::uint64_t u64() { return take(8); }
    bool done() const noexcept { return pos_ == bytes_.size(); }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::uint64_t take(std::size_t width) {
        if (bytes_.size() - pos_ < width) throw WireFormatError("truncated ring message");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i)
            v |= std::uint64_t{std::to_integer<std::uint8_t>(bytes_[pos_ + i])} << (8 * i);
        pos_ += width;
        return v;
    }

    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::size_t encoded_size(const RingMessage &m) {
    const std::size_t perMember = m.kind == PayloadKind::LabeledCommunities ? 8 : 4;
    return 24 + 16 * m.block.size() + perMember * m.block.member_count();
}

inline std::vector<std::byte> serialize(const RingMessage &m) {
    const bool labeled = m.kind == PayloadKind::LabeledCommunities;
    if (labeled && m.labels.size() != m.block.member_count())
        throw std::invalid_argument("labeled payload needs one label per member");
    std::vector<std::byte> out;
    out.reserve(encoded_size(m));
    detail::put_u32(out, m.senderId);
    detail::put_u32(out, m.originId);
    detail::put_u32(out, m.hopCount);
    detail::put_u32(out, static_cast<std::uint32_t>(m.kind));
    detail::put_u64(out, m.block.size());
    for (std::size_t i = 0; i < m.block.size(); ++i) {
        auto members = m.block.members_of(i);
        detail::put_u64(out, m.block.ids[i]);
        detail::put_u64(out, members.size());
        for (NodeId v : members) detail::put_u32(out, v);
        if (labeled)
            for (std::uint64_t k = m.block.offsets[i]; k < m.block.offsets[i + 1]; ++k)
                detail::put_u32(out, m.labels[k]);
    }
    return out;
}

inline RingMessage deserialize(std::span<const std::byte> bytes) {
    detail::Reader in(bytes);
    RingMessage m;
    m.senderId = in.u32();
    m.originId = in.u32();
    m.hopCount = in.u32();
    const auto kind = in.u32();
    if (kind != 1 && kind != 2) throw WireFormatError("unknown payload kind " + std::to_string(kind));
    m.kind = static_cast<PayloadKind>(kind);
    const bool labeled = m.kind == PayloadKind::LabeledCommunities;
    const auto records = in.u64();
    for (std::uint64_t r = 0; r < records; ++r) {
        const auto id = in.u64();
        const auto count = in.u64();
        if (id > kUnassigned) throw WireFormatError("community id out of range");
        if (count > in.remaining() / (labeled ? 8 : 4)) throw WireFormatError("truncated ring message");
        m.block.ids.push_back(static_cast<CommunityId>(id));
        for (std::uint64_t k = 0; k < count; ++k) m.block.members.push_back(in.u32());
        m.block.offsets.push_back(m.block.members.size());
        if (labeled)
            for (std::uint64_t k = 0; k < count; ++k) m.labels.push_back(in.u32());
    }
    if (!in.done()) throw WireFormatError("trailing bytes after ring message");
    return m;
}

} // namespace cqt::parallel
