// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_TX_HPP
#define ORDFORGE_TX_HPP

#include <ordforge/hash.hpp>
#include <ordforge/sat_math.hpp>
#include <ordforge/script.hpp>
#include <ordforge/util.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ordforge {

//! Transaction id in internal byte order; Hex() renders the reversed display
//! form used everywhere user-facing.
struct Txid {
    Hash256 bytes{};

    std::string Hex() const { return HashToHexReversed(bytes); }
    static Txid FromHex(std::string_view hex) { return Txid{HashFromHexReversed(hex)}; }

    auto operator<=>(const Txid&) const = default;
};

struct OutPoint {
    Txid txid;
    std::uint32_t vout = 0;

    std::string ToString() const { return txid.Hex() + ":" + std::to_string(vout); }

    auto operator<=>(const OutPoint&) const = default;
};

//! The all-zero txid with vout 0xffffffff; marks a coinbase input.
OutPoint NullOutPoint();
bool IsNullOutPoint(const OutPoint& op);

inline constexpr std::uint32_t FINAL_SEQUENCE = 0xffffffff;

struct TxIn {
    OutPoint prevout;
    std::uint32_t sequence = FINAL_SEQUENCE;

    bool operator==(const TxIn&) const = default;
};

struct TxOut {
    std::uint64_t value = 0;
    Script script_pubkey;

    bool operator==(const TxOut&) const = default;
};

//! SegWit transaction. Inputs carry no script field; an input serializes as
//! txid || vout || sequence. `witnesses` must stay sized to `inputs` (empty
//! stacks allowed).
struct Transaction {
    std::uint32_t version = 2;
    std::vector<TxIn> inputs;
    std::vector<TxOut> outputs;
    std::vector<std::vector<Bytes>> witnesses;
    std::uint32_t locktime = 0;

    bool HasWitnessData() const;

    bool operator==(const Transaction&) const = default;
};

//! Layout: version || varint(#in) || inputs || varint(#out) || outputs ||
//! locktime, little-endian integers and Bitcoin varints throughout.
Bytes SerializeBase(const Transaction& tx);
//! Inserts marker 0x00 and flag 0x01 after the version and the per-input
//! witness stacks before the locktime. Falls back to the base layout when
//! every witness stack is empty.
Bytes SerializeFull(const Transaction& tx);
//! Inverse of SerializeFull. Throws ParseError on truncation, trailing bytes,
//! a zero input count, or a witness flag without witness data.
Transaction DeserializeTx(std::span<const std::uint8_t> bytes);

//! txid hashes the base serialization, so witness data never affects it.
Txid TxidOf(const Transaction& tx);
Txid WtxidOf(const Transaction& tx);

inline constexpr std::uint64_t MAX_BLOCK_WEIGHT = 4'000'000;
inline constexpr std::uint64_t MAX_BLOCK_BASE_SIZE = 1'000'000;

//! weight = 3 * base size + full size.
std::uint64_t TxWeight(const Transaction& tx);

struct BlockLimits {
    bool ok = true;
    std::string violation; // names the cap that failed
};
BlockLimits CheckBlockLimits(std::span<const Transaction> txs);

//! Half-open interval of sat numbers.
struct SatRange {
    Sat start;
    Sat end;

    std::uint64_t Size() const { return end.n - start.n; }

    auto operator<=>(const SatRange&) const = default;
};

std::uint64_t TotalSats(std::span<const SatRange> ranges);

struct FifoResult {
    std::vector<std::vector<SatRange>> outputs; // per-output ranges, in order
    std::vector<SatRange> fee;                  // leftover sats, in order
};

//! Concatenates the per-input ranges in input order and slices the sequence
//! into the outputs in output order; whatever remains is the fee. Throws
//! ValidationError when the inputs cannot cover the outputs.
FifoResult ApplyFifo(std::span<const std::vector<SatRange>> inputs, std::span<const std::uint64_t> output_values);

//! Offset of `s` within the concatenation of `ranges`, or nullopt.
std::optional<std::uint64_t> LocateSat(std::span<const SatRange> ranges, Sat s);

} // namespace ordforge

#endif // ORDFORGE_TX_HPP
