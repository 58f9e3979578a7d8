// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/tx.hpp>

#include <algorithm>
#include <numeric>

namespace ordforge {

OutPoint NullOutPoint()
{
    OutPoint op;
    op.vout = FINAL_SEQUENCE;
    return op;
}

bool IsNullOutPoint(const OutPoint& op)
{
    return op == NullOutPoint();
}

bool Transaction::HasWitnessData() const
{
    return std::any_of(witnesses.begin(), witnesses.end(), [](const auto& stack) { return !stack.empty(); });
}

namespace {

void CheckShape(const Transaction& tx)
{
    if (tx.inputs.empty()) throw ValidationError("transaction needs at least one input");
    if (tx.outputs.empty()) throw ValidationError("transaction needs at least one output");
    if (tx.witnesses.size() != tx.inputs.size()) {
        throw ValidationError("witness count does not match input count");
    }
}

void WriteBase(ByteWriter& w, const Transaction& tx)
{
    w.U32LE(tx.version);
    w.VarInt(tx.inputs.size());
    for (const TxIn& in : tx.inputs) {
        w.Raw(in.prevout.txid.bytes);
        w.U32LE(in.prevout.vout);
        w.U32LE(in.sequence);
    }
    w.VarInt(tx.outputs.size());
    for (const TxOut& out : tx.outputs) {
        w.U64LE(out.value);
        Bytes script = out.script_pubkey.Encode();
        w.VarInt(script.size());
        w.Raw(script);
    }
    w.U32LE(tx.locktime);
}

} // namespace

Bytes SerializeBase(const Transaction& tx)
{
    CheckShape(tx);
    ByteWriter w;
    WriteBase(w, tx);
    return w.Take();
}

Bytes SerializeFull(const Transaction& tx)
{
    CheckShape(tx);
    if (!tx.HasWitnessData()) return SerializeBase(tx);
    ByteWriter w;
    w.U32LE(tx.version);
    w.U8(0x00); // marker
    w.U8(0x01); // flag
    w.VarInt(tx.inputs.size());
    for (const TxIn& in : tx.inputs) {
        w.Raw(in.prevout.txid.bytes);
        w.U32LE(in.prevout.vout);
        w.U32LE(in.sequence);
    }
    w.VarInt(tx.outputs.size());
    for (const TxOut& out : tx.outputs) {
        w.U64LE(out.value);
        Bytes script = out.script_pubkey.Encode();
        w.VarInt(script.size());
        w.Raw(script);
    }
    for (const auto& stack : tx.witnesses) {
        w.VarInt(stack.size());
        for (const Bytes& item : stack) {
            w.VarInt(item.size());
            w.Raw(item);
        }
    }
    w.U32LE(tx.locktime);
    return w.Take();
}

Transaction DeserializeTx(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    Transaction tx;
    tx.version = r.U32LE();
    bool segwit = false;
    if (r.Peek() == 0x00) {
        r.U8();
        if (r.U8() != 0x01) throw ParseError("witness flag must be 0x01");
        segwit = true;
    }
    std::uint64_t nin = r.VarInt();
    if (nin == 0) throw ParseError("transaction needs at least one input");
    for (std::uint64_t i = 0; i < nin; ++i) {
        TxIn in;
        Bytes txid = r.Raw(32);
        std::copy(txid.begin(), txid.end(), in.prevout.txid.bytes.begin());
        in.prevout.vout = r.U32LE();
        in.sequence = r.U32LE();
        tx.inputs.push_back(std::move(in));
    }
    std::uint64_t nout = r.VarInt();
    if (nout == 0) throw ParseError("transaction needs at least one output");
    for (std::uint64_t i = 0; i < nout; ++i) {
        TxOut out;
        out.value = r.U64LE();
        std::uint64_t len = r.VarInt();
        out.script_pubkey = Script::Decode(r.View(len));
        tx.outputs.push_back(std::move(out));
    }
    if (segwit) {
        for (std::uint64_t i = 0; i < nin; ++i) {
            std::uint64_t items = r.VarInt();
            std::vector<Bytes> stack;
            for (std::uint64_t j = 0; j < items; ++j) stack.push_back(r.Raw(r.VarInt()));
            tx.witnesses.push_back(std::move(stack));
        }
    } else {
        tx.witnesses.resize(tx.inputs.size());
    }
    tx.locktime = r.U32LE();
    if (!r.AtEnd()) throw ParseError("trailing bytes after transaction at byte " + std::to_string(r.Pos()));
    if (segwit && !tx.HasWitnessData()) throw ParseError("witness flag without witness data");
    return tx;
}

Txid TxidOf(const Transaction& tx)
{
    return Txid{DoubleSha256(SerializeBase(tx))};
}

Txid WtxidOf(const Transaction& tx)
{
    return Txid{DoubleSha256(SerializeFull(tx))};
}

std::uint64_t TxWeight(const Transaction& tx)
{
    return 3 * SerializeBase(tx).size() + SerializeFull(tx).size();
}

BlockLimits CheckBlockLimits(std::span<const Transaction> txs)
{
    std::uint64_t weight = 0;
    std::uint64_t base = 0;
    for (const Transaction& tx : txs) {
        base += SerializeBase(tx).size();
        weight += TxWeight(tx);
    }
    if (base > MAX_BLOCK_BASE_SIZE) {
        return {false,
                "block base size " + std::to_string(base) + " exceeds " + std::to_string(MAX_BLOCK_BASE_SIZE)};
    }
    if (weight > MAX_BLOCK_WEIGHT) {
        return {false, "block weight " + std::to_string(weight) + " exceeds " + std::to_string(MAX_BLOCK_WEIGHT)};
    }
    return {};
}

std::uint64_t TotalSats(std::span<const SatRange> ranges)
{
    std::uint64_t total = 0;
    for (const SatRange& range : ranges) total += range.Size();
    return total;
}

FifoResult ApplyFifo(std::span<const std::vector<SatRange>> inputs, std::span<const std::uint64_t> output_values)
{
    std::vector<SatRange> queue;
    std::uint64_t available = 0;
    for (const auto& ranges : inputs) {
        for (const SatRange& range : ranges) {
            if (range.start >= range.end) throw ValidationError("empty or inverted sat range");
            queue.push_back(range);
            available += range.Size();
        }
    }
    std::uint64_t needed = std::accumulate(output_values.begin(), output_values.end(), std::uint64_t{0});
    if (needed > available) {
        throw ValidationError("insufficient input sats: have " + std::to_string(available) + ", need " +
                              std::to_string(needed));
    }

    FifoResult result;
    std::size_t next = 0;
    for (std::uint64_t value : output_values) {
        std::vector<SatRange> slice;
        std::uint64_t remaining = value;
        while (remaining > 0) {
            SatRange& head = queue[next];
            std::uint64_t take = std::min(remaining, head.Size());
            slice.push_back(SatRange{head.start, Sat{head.start.n + take}});
            head.start.n += take;
            remaining -= take;
            if (head.Size() == 0) ++next;
        }
        result.outputs.push_back(std::move(slice));
    }
    for (; next < queue.size(); ++next) {
        if (queue[next].Size() > 0) result.fee.push_back(queue[next]);
    }
    return result;
}

std::optional<std::uint64_t> LocateSat(std::span<const SatRange> ranges, Sat s)
{
    std::uint64_t offset = 0;
    for (const SatRange& range : ranges) {
        if (s >= range.start && s < range.end) return offset + (s.n - range.start.n);
        offset += range.Size();
    }
    return std::nullopt;
}

} // namespace ordforge
