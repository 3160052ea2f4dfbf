// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <zlib.h>

#include "zigzag/code_c1.hpp"
#include "zigzag/code_c2.hpp"
#include "zigzag/decoder.hpp"
#include "zigzag/field.hpp"
#include "zigzag/rebuild.hpp"

namespace zigzag {

/// Fixed 29-byte little-endian shard header:
///
///   offset size field
///   0      4    magic "ZG01"
///   4      1    version (1)
///   5      1    construction (1 or 2)
///   6      1    r
///   7      1    k
///   8      2    field characteristic p
///   10     1    field degree m
///   11     2    reduction polynomial (0 if unused)
///   13     2    alpha (0 for construction 1)
///   15     2    node index, 1-based
///   17     4    rows per stripe (r^k)
///   21     4    stripe count
///   25     4    CRC32 of the payload
struct ShardHeader {
    static constexpr std::size_t kSize = 29;

    std::uint8_t version = 1;
    std::uint8_t construction = 0;
    std::uint8_t r = 0, k = 0;
    std::uint16_t field_p = 0;
    std::uint8_t field_m = 0;
    std::uint16_t reduction_poly = 0;
    std::uint16_t alpha = 0;
    std::uint16_t node_index = 0;
    std::uint32_t rows = 0;
    std::uint32_t stripe_count = 0;
    std::uint32_t payload_crc32 = 0;

    std::array<std::uint8_t, kSize> serialize() const {
        std::array<std::uint8_t, kSize> b{};
        b[0] = 'Z', b[1] = 'G', b[2] = '0', b[3] = '1';
        b[4] = version;
        b[5] = construction;
        b[6] = r;
        b[7] = k;
        put16(b.data() + 8, field_p);
        b[10] = field_m;
        put16(b.data() + 11, reduction_poly);
        put16(b.data() + 13, alpha);
        put16(b.data() + 15, node_index);
        put32(b.data() + 17, rows);
        put32(b.data() + 21, stripe_count);
        put32(b.data() + 25, payload_crc32);
        return b;
    }

    static ShardHeader parse(const std::uint8_t* b, std::size_t len) {
        if (len < kSize) throw std::invalid_argument("shard header: truncated");
        if (b[0] != 'Z' || b[1] != 'G' || b[2] != '0' || b[3] != '1')
            throw std::invalid_argument("shard header: bad magic");
        ShardHeader h;
        h.version = b[4];
        if (h.version != 1) throw std::invalid_argument("shard header: unsupported version");
        h.construction = b[5];
        h.r = b[6];
        h.k = b[7];
        h.field_p = get16(b + 8);
        h.field_m = b[10];
        h.reduction_poly = get16(b + 11);
        h.alpha = get16(b + 13);
        h.node_index = get16(b + 15);
        h.rows = get32(b + 17);
        h.stripe_count = get32(b + 21);
        h.payload_crc32 = get32(b + 25);
        return h;
    }

    /// Everything except node index and CRC must agree across a shard set.
    bool compatible(const ShardHeader& o) const {
        return version == o.version && construction == o.construction && r == o.r && k == o.k &&
               field_p == o.field_p && field_m == o.field_m && reduction_poly == o.reduction_poly &&
               alpha == o.alpha && rows == o.rows && stripe_count == o.stripe_count;
    }

  private:
    static void put16(std::uint8_t* p, std::uint16_t v) {
        p[0] = std::uint8_t(v);
        p[1] = std::uint8_t(v >> 8);
    }
    static void put32(std::uint8_t* p, std::uint32_t v) {
        for (int i = 0; i < 4; ++i) p[i] = std::uint8_t(v >> (8 * i));
    }
    static std::uint16_t get16(const std::uint8_t* p) {
        return std::uint16_t(p[0] | (std::uint16_t(p[1]) << 8));
    }
    static std::uint32_t get32(const std::uint8_t* p) {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
        return v;
    }
};

struct ShardFile {
    ShardHeader header;
    std::vector<std::uint8_t> payload;  // stripe_count * rows symbols, one per byte
    bool crc_ok = true;                 // set by read_shard
};

inline std::uint32_t crc32_of(const std::vector<std::uint8_t>& data) {
    return static_cast<std::uint32_t>(
        ::crc32(::crc32(0L, Z_NULL, 0), data.data(), static_cast<uInt>(data.size())));
}

class shard_io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void write_shard(const std::string& path, const ShardFile& shard) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw shard_io_error("cannot open '" + path + "' for writing");
    const auto head = shard.header.serialize();
    out.write(reinterpret_cast<const char*>(head.data()), head.size());
    out.write(reinterpret_cast<const char*>(shard.payload.data()),
              static_cast<std::streamsize>(shard.payload.size()));
    if (!out) throw shard_io_error("short write to '" + path + "'");
}

/// Reads and parses one shard. I/O and header problems throw; a payload CRC
/// mismatch only clears crc_ok so callers can drop the shard and continue.
inline ShardFile read_shard(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw shard_io_error("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    ShardFile shard;
    shard.header = ShardHeader::parse(bytes.data(), bytes.size());
    const std::uint64_t want =
        std::uint64_t(shard.header.rows) * shard.header.stripe_count + ShardHeader::kSize;
    if (bytes.size() != want) throw shard_io_error("'" + path + "': payload size mismatch");
    shard.payload.assign(bytes.begin() + ShardHeader::kSize, bytes.end());
    shard.crc_ok = crc32_of(shard.payload) == shard.header.payload_crc32;
    return shard;
}

/// Number of symbols used to carry the 64-bit original-length preamble:
/// the length is written in little-endian base-`order` digits, so this is 8
/// bytes for order 256 and grows only for smaller fields.
inline std::uint32_t preamble_symbols(std::uint32_t order) {
    std::uint32_t l = 0;
    unsigned __int128 acc = 1;
    const unsigned __int128 limit = (unsigned __int128)1 << 64;
    while (acc < limit) {
        acc *= order;
        ++l;
    }
    return l;
}

namespace detail {

inline void append_preamble(std::vector<FieldElem>& stream, std::uint64_t length, std::uint32_t order) {
    std::uint64_t v = length;
    for (std::uint32_t i = 0; i < preamble_symbols(order); ++i) {
        stream.push_back(static_cast<FieldElem>(v % order));
        v /= order;
    }
}

inline std::uint64_t read_preamble(const std::vector<FieldElem>& stream, std::uint32_t order) {
    const std::uint32_t l = preamble_symbols(order);
    if (stream.size() < l) throw std::invalid_argument("destripe: stream shorter than preamble");
    unsigned __int128 v = 0;
    for (std::uint32_t i = l; i-- > 0;) v = v * order + stream[i];
    if (v > UINT64_MAX) throw std::invalid_argument("destripe: corrupt length preamble");
    return static_cast<std::uint64_t>(v);
}

template <class Code>
constexpr std::uint8_t construction_id() {
    return std::is_same_v<Code, C1Code> ? 1 : 2;
}

template <class Code>
std::uint16_t alpha_of(const Code& code) {
    if constexpr (std::is_same_v<Code, C2Code>)
        return code.params().alpha;
    else
        return 0;
}

}  // namespace detail

/// Splits `data` (one field symbol per byte) into stripes, encodes each, and
/// returns one shard per node. The symbol stream is the length preamble
/// followed by the data, zero-padded to a whole number of stripes.
template <class Code>
std::vector<ShardFile> encode_stream(const Code& code, const std::vector<std::uint8_t>& data) {
    const Field& F = code.field();
    if (F.order() > 256) throw std::invalid_argument("file mode supports fields of order <= 256 only");
    for (std::uint8_t b : data)
        if (b >= F.order())
            throw std::domain_error("input byte " + std::to_string(b) +
                                    " is not a valid field symbol; file mode expects symbol files");

    const std::uint32_t p = code.rows(), q = code.systematic_count(), n = code.node_count();
    std::vector<FieldElem> stream;
    stream.reserve(data.size() + preamble_symbols(F.order()));
    detail::append_preamble(stream, data.size(), F.order());
    for (std::uint8_t b : data) stream.push_back(b);
    const std::uint64_t per_stripe = std::uint64_t(p) * q;
    const std::uint32_t stripes =
        static_cast<std::uint32_t>((stream.size() + per_stripe - 1) / per_stripe);
    stream.resize(std::size_t(stripes) * per_stripe, 0);

    std::vector<ShardFile> shards(n);
    for (auto& s : shards) s.payload.reserve(std::size_t(stripes) * p);
    std::vector<std::vector<FieldElem>> info(q, std::vector<FieldElem>(p));
    for (std::uint32_t s = 0; s < stripes; ++s) {
        const std::size_t base = std::size_t(s) * per_stripe;
        for (std::uint32_t j = 0; j < q; ++j)
            for (std::uint32_t i = 0; i < p; ++i) info[j][i] = stream[base + std::size_t(j) * p + i];
        const auto parities = code.encode(info);
        for (std::uint32_t j = 0; j < q; ++j)
            for (std::uint32_t i = 0; i < p; ++i)
                shards[j].payload.push_back(static_cast<std::uint8_t>(info[j][i]));
        for (std::uint32_t l = 0; l < code.parity_count(); ++l)
            for (std::uint32_t i = 0; i < p; ++i)
                shards[q + l].payload.push_back(static_cast<std::uint8_t>(parities[l][i]));
    }

    for (std::uint32_t node = 1; node <= n; ++node) {
        ShardHeader& h = shards[node - 1].header;
        h.construction = detail::construction_id<Code>();
        h.r = static_cast<std::uint8_t>(code.parity_count());
        h.k = static_cast<std::uint8_t>(code.params().k);
        h.field_p = static_cast<std::uint16_t>(F.characteristic());
        h.field_m = static_cast<std::uint8_t>(F.degree());
        h.reduction_poly = static_cast<std::uint16_t>(F.reduction_poly());
        h.alpha = detail::alpha_of(code);
        h.node_index = static_cast<std::uint16_t>(node);
        h.rows = p;
        h.stripe_count = stripes;
        h.payload_crc32 = crc32_of(shards[node - 1].payload);
    }
    return shards;
}

/// Symbol source over a set of loaded shards that counts every distinct
/// payload symbol handed out, per node. Rebuild reports are checked against
/// these measurements rather than a formula.
class CountingSymbolSource {
  public:
    explicit CountingSymbolSource(const std::map<std::uint32_t, const ShardFile*>& shards)
        : shards_(shards) {
        for (const auto& [node, shard] : shards_)
            touched_[node].assign(shard->payload.size(), false);
    }

    FieldElem fetch(std::uint32_t node, std::uint32_t stripe, std::uint32_t row) {
        const auto it = shards_.find(node);
        if (it == shards_.end()) throw std::invalid_argument("symbol source: node not loaded");
        const ShardFile& shard = *it->second;
        const std::size_t idx = std::size_t(stripe) * shard.header.rows + row;
        touched_[node][idx] = true;
        return shard.payload[idx];
    }

    std::uint64_t distinct_reads(std::uint32_t node) const {
        const auto it = touched_.find(node);
        if (it == touched_.end()) return 0;
        std::uint64_t c = 0;
        for (bool b : it->second) c += b;
        return c;
    }

    std::map<std::uint32_t, std::uint64_t> all_distinct_reads() const {
        std::map<std::uint32_t, std::uint64_t> out;
        for (const auto& [node, _] : touched_) out[node] = distinct_reads(node);
        return out;
    }

  private:
    std::map<std::uint32_t, const ShardFile*> shards_;
    std::map<std::uint32_t, std::vector<bool>> touched_;
};

struct RebuildOutcome {
    ShardFile restored;
    RebuildPlan plan;
    AccessReport report;                               // derived from the plan, per stripe
    std::map<std::uint32_t, std::uint64_t> measured;   // node -> distinct symbols actually read
};

/// Rebuilds the single missing shard from the surviving ones using the
/// construction's minimal-access plan, and measures the symbols it touched.
template <class Code>
RebuildOutcome rebuild_shard(const Code& code, const std::map<std::uint32_t, const ShardFile*>& shards,
                             std::uint32_t lost_node) {
    if (shards.count(lost_node)) throw std::invalid_argument("rebuild: lost node is present");
    const std::uint32_t n = code.node_count();
    for (std::uint32_t node = 1; node <= n; ++node)
        if (node != lost_node && !shards.count(node))
            throw std::invalid_argument("rebuild: node " + std::to_string(node) +
                                        " is missing too; use decode instead");
    const ShardHeader& ref = shards.begin()->second->header;

    RebuildOutcome out;
    out.plan = code.rebuild(lost_node);
    out.report = access_report(out.plan);
    CountingSymbolSource source(shards);
    out.restored.payload.reserve(std::size_t(ref.stripe_count) * ref.rows);
    for (std::uint32_t s = 0; s < ref.stripe_count; ++s) {
        const auto column = execute_plan(code.field(), out.plan, [&](std::uint32_t node, std::uint32_t row) {
            return source.fetch(node, s, row);
        });
        for (FieldElem v : column) out.restored.payload.push_back(static_cast<std::uint8_t>(v));
    }
    out.measured = source.all_distinct_reads();
    for (const auto& [node, rows] : out.plan.reads)
        if (out.measured[node] != std::uint64_t(rows.size()) * ref.stripe_count)
            throw std::logic_error("rebuild: measured access deviates from the plan");
    out.restored.header = ref;
    out.restored.header.node_index = static_cast<std::uint16_t>(lost_node);
    out.restored.header.payload_crc32 = crc32_of(out.restored.payload);
    return out;
}

/// Recovers the original byte stream from any >= q consistent shards.
template <class Code>
std::vector<std::uint8_t> decode_stream(const Code& code,
                                        const std::map<std::uint32_t, const ShardFile*>& shards) {
    const std::uint32_t p = code.rows(), q = code.systematic_count(), n = code.node_count();
    if (shards.empty()) throw std::invalid_argument("decode: no shards");
    const ShardHeader& ref = shards.begin()->second->header;
    std::vector<std::uint32_t> missing;
    for (std::uint32_t node = 1; node <= n; ++node)
        if (!shards.count(node)) missing.push_back(node);
    if (n - missing.size() < q)
        throw std::invalid_argument("decode: only " + std::to_string(n - missing.size()) + " of " +
                                    std::to_string(n) + " shards available, need at least " +
                                    std::to_string(q));

    std::vector<FieldElem> stream;
    stream.reserve(std::size_t(ref.stripe_count) * p * q);
    const bool all_systematic_present =
        std::all_of(missing.begin(), missing.end(), [&](std::uint32_t m) { return m > q; });
    const ErasurePattern pattern =
        ErasurePattern::of(missing, n, code.parity_count());
    for (std::uint32_t s = 0; s < ref.stripe_count; ++s) {
        std::vector<std::vector<FieldElem>> columns(n);
        for (const auto& [node, shard] : shards) {
            auto& col = columns[node - 1];
            col.resize(p);
            for (std::uint32_t i = 0; i < p; ++i)
                col[i] = shard->payload[std::size_t(s) * p + i];
        }
        if (all_systematic_present) {
            for (std::uint32_t j = 0; j < q; ++j)
                stream.insert(stream.end(), columns[j].begin(), columns[j].end());
        } else {
            const auto info = decode_erasures(code, columns, pattern);
            for (std::uint32_t j = 0; j < q; ++j)
                stream.insert(stream.end(), info[j].begin(), info[j].end());
        }
    }
    const std::uint64_t length = detail::read_preamble(stream, code.field().order());
    const std::uint32_t lead = preamble_symbols(code.field().order());
    if (length > stream.size() - lead) throw corruption_error("decode: length preamble exceeds payload");
    std::vector<std::uint8_t> bytes(length);
    for (std::uint64_t i = 0; i < length; ++i) bytes[i] = static_cast<std::uint8_t>(stream[lead + i]);
    return bytes;
}

using AnyCode = std::variant<C1Code, C2Code>;

/// Rebuilds the code object a shard set was produced with. Lambda-scheme
/// codes need the coefficients passed in since they are not stored on disk.
inline AnyCode code_from_header(const ShardHeader& h, const std::vector<FieldElem>& lambda = {},
                                std::uint64_t cap = kDefaultSizeCap) {
    Field field(h.field_p, h.field_m, h.reduction_poly);
    const bool explicit_ok = (h.r == 2 && field.order() == 3) || (h.r == 3 && field.order() == 4);
    const CoeffScheme scheme =
        !lambda.empty() ? CoeffScheme::lambda
                        : (explicit_ok ? CoeffScheme::explicit_rule
                                       : throw std::invalid_argument(
                                             "this shard set uses searched coefficients; pass --lambda"));
    if (h.construction == 1) {
        C1Params params;
        params.r = h.r;
        params.k = h.k;
        params.field = field;
        params.scheme = scheme;
        params.lambda = lambda;
        params.size_cap = cap;
        return C1Code::build(params);
    }
    if (h.construction == 2) {
        C2Params params;
        params.r = h.r;
        params.k = h.k;
        params.field = field;
        params.alpha = h.alpha;
        params.scheme = scheme;
        params.lambda = lambda;
        params.size_cap = cap;
        return C2Code::build(params);
    }
    throw std::invalid_argument("shard header: unknown construction");
}

}  // namespace zigzag
