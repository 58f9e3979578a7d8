// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/chain.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace ordforge {

Hash256 SighashFor(const Transaction& tx, std::size_t input_index)
{
    if (input_index >= tx.inputs.size()) throw std::out_of_range("sighash input index out of range");
    const OutPoint& spent = tx.inputs[input_index].prevout;
    ByteWriter w;
    w.Raw(SerializeBase(tx));
    w.U32LE(static_cast<std::uint32_t>(input_index));
    w.Raw(spent.txid.bytes);
    w.U32LE(spent.vout);
    return TaggedHash(TAG_SIGHASH, w.Out());
}

bool TxSignatureChecker::CheckSig(std::span<const std::uint8_t> sig, std::span<const std::uint8_t> pubkey) const
{
    try {
        Point q = m_curve.DecodePoint(pubkey);
        Signature decoded = DecodeSignature(m_curve, sig);
        return m_curve.Verify(q, m_sighash, decoded);
    } catch (const std::exception&) {
        return false;
    }
}

SpendAnalysis AnalyzeSpend(const Curve& curve, const Script& script_pubkey, const std::vector<Bytes>& witness)
{
    SpendAnalysis res;
    const std::vector<Op>& ops = script_pubkey.Ops();
    bool taproot_shape =
        ops.size() == 2 && ops[0].IsPush() && ops[0].data.size() == 33 && ops[1].code == OP_CHECKSIG;
    if (taproot_shape && witness.size() >= 2) {
        const Bytes& control = witness.back();
        if (control.size() >= 33 && (control.size() - 33) % 32 == 0) {
            res.script_path = true;
            Point internal_key;
            try {
                internal_key = curve.DecodePoint(std::span(control).first(33));
            } catch (const ParseError& err) {
                res.rejection = std::string("control block: ") + err.what();
                return res;
            }
            const Bytes& leaf_bytes = witness[witness.size() - 2];
            try {
                res.leaf = Script::Decode(leaf_bytes);
            } catch (const ParseError& err) {
                res.rejection = std::string("leaf script: ") + err.what();
                return res;
            }
            Hash256 node = MerkleLeaf(leaf_bytes);
            for (std::size_t at = 33; at < control.size(); at += 32) {
                Hash256 sibling;
                std::copy(control.begin() + at, control.begin() + at + 32, sibling.begin());
                node = MerkleNode(node, sibling);
            }
            Point committed;
            try {
                committed = curve.DecodePoint(ops[0].data);
            } catch (const ParseError&) {
                res.rejection = "output key is not a curve point";
                return res;
            }
            Point output = curve.Add(internal_key, curve.MulG(TaprootTweak(curve, internal_key, node)));
            if (output.infinity || !(output == committed)) {
                res.rejection = "control block does not prove the output key";
                return res;
            }
            res.stack.assign(witness.begin(), witness.end() - 2);
            return res;
        }
    }
    res.leaf = script_pubkey;
    res.stack = witness;
    return res;
}

namespace {

Hash256 ComputeBlockHash(std::uint64_t height, const Hash256& prev_hash, std::span<const Transaction> txs)
{
    ByteWriter ids;
    for (const Transaction& tx : txs) ids.Raw(TxidOf(tx).bytes);
    Hash256 summary = DoubleSha256(ids.Out());
    ByteWriter header;
    header.U64LE(height);
    header.Raw(prev_hash);
    header.Raw(summary);
    return DoubleSha256(header.Out());
}

std::string JsonU64(std::uint64_t v)
{
    return std::to_string(v);
}

std::uint64_t FieldU64(const nlohmann::json& j, const char* key)
{
    return ParseU64(j.at(key).get<std::string>(), key);
}

} // namespace

ChainState::ChainState(NetworkParams params, bool validate_signatures)
    : m_params(params), m_validate_signatures(validate_signatures)
{
}

void ChainState::ValidateTx(const Transaction& tx, std::size_t index, std::uint64_t height,
                            const std::map<OutPoint, UtxoEntry>& view) const
{
    auto reject = [&](const std::string& why) { throw ValidationError("tx " + std::to_string(index) + ": " + why); };
    if (tx.inputs.empty()) reject("needs at least one input");
    if (tx.outputs.empty()) reject("needs at least one output");
    if (tx.witnesses.size() != tx.inputs.size()) reject("witness count does not match input count");

    for (std::size_t k = 0; k < tx.inputs.size(); ++k) {
        const OutPoint& prev = tx.inputs[k].prevout;
        if (IsNullOutPoint(prev)) reject("input " + std::to_string(k) + " uses the coinbase marker outpoint");
        auto it = view.find(prev);
        if (it == view.end()) reject("missing input " + prev.ToString());
        const UtxoEntry& utxo = it->second;

        SpendAnalysis plan = AnalyzeSpend(DefaultCurve(), utxo.script_pubkey, tx.witnesses[k]);
        if (!plan.rejection.empty()) reject("input " + std::to_string(k) + ": " + plan.rejection);

        TxSignatureChecker strict(DefaultCurve(), SighashFor(tx, k));
        AcceptingChecker lax;
        ExecContext ctx;
        ctx.checker = m_validate_signatures ? static_cast<const SignatureChecker*>(&strict) : &lax;
        ctx.confirmations = height - utxo.height;
        ExecResult res = ExecuteScript(plan.leaf, plan.stack, ctx);
        if (!res.accepted) {
            reject("input " + std::to_string(k) + " script rejected: " + res.Reason());
        }
    }

    std::uint64_t in_value = 0;
    for (const TxIn& in : tx.inputs) in_value += view.at(in.prevout).value;
    std::uint64_t out_value = 0;
    for (const TxOut& out : tx.outputs) out_value += out.value;
    if (out_value > in_value) reject("outputs exceed inputs");
}

const Block& ChainState::MineBlock(std::span<const Transaction> txs, const Script& miner_script)
{
    const std::uint64_t height = Height();

    std::set<OutPoint> spent;
    std::uint64_t total_fees = 0;
    std::vector<std::pair<OutPoint, UtxoEntry>> created;
    std::vector<std::vector<SatRange>> fee_ranges;

    for (std::size_t i = 0; i < txs.size(); ++i) {
        const Transaction& tx = txs[i];
        ValidateTx(tx, i, height, m_utxos);
        for (const TxIn& in : tx.inputs) {
            if (!spent.insert(in.prevout).second) {
                throw ValidationError("tx " + std::to_string(i) + ": input " + in.prevout.ToString() +
                                      " already spent in block");
            }
        }

        std::vector<std::vector<SatRange>> input_ranges;
        std::uint64_t in_value = 0;
        for (const TxIn& in : tx.inputs) {
            const UtxoEntry& utxo = m_utxos.at(in.prevout);
            input_ranges.push_back(utxo.ranges);
            in_value += utxo.value;
        }
        std::vector<std::uint64_t> out_values;
        for (const TxOut& out : tx.outputs) out_values.push_back(out.value);
        FifoResult flow = ApplyFifo(input_ranges, out_values);
        total_fees += in_value - std::accumulate(out_values.begin(), out_values.end(), std::uint64_t{0});

        Txid txid = TxidOf(tx);
        for (std::size_t vout = 0; vout < tx.outputs.size(); ++vout) {
            created.emplace_back(OutPoint{txid, static_cast<std::uint32_t>(vout)},
                                 UtxoEntry{tx.outputs[vout].value, tx.outputs[vout].script_pubkey,
                                           std::move(flow.outputs[vout]), height});
        }
        fee_ranges.push_back(std::move(flow.fee));
    }

    std::uint64_t subsidy = SubsidyAtHeight(m_params, height);
    Transaction coinbase;
    coinbase.inputs = {TxIn{NullOutPoint(), FINAL_SEQUENCE}};
    coinbase.witnesses = {{}};
    // Stamped so coinbase txids stay unique across heights.
    coinbase.locktime = static_cast<std::uint32_t>(height);
    coinbase.outputs = {TxOut{subsidy + total_fees, miner_script}};

    std::vector<SatRange> coinbase_ranges;
    if (subsidy > 0) {
        std::uint64_t first = FirstSatOfHeight(m_params, height);
        coinbase_ranges.push_back(SatRange{Sat{first}, Sat{first + subsidy}});
    }
    for (const auto& ranges : fee_ranges) {
        coinbase_ranges.insert(coinbase_ranges.end(), ranges.begin(), ranges.end());
    }

    std::vector<Transaction> block_txs;
    block_txs.reserve(txs.size() + 1);
    block_txs.push_back(coinbase);
    block_txs.insert(block_txs.end(), txs.begin(), txs.end());
    BlockLimits limits = CheckBlockLimits(block_txs);
    if (!limits.ok) throw ValidationError(limits.violation);

    // All checks passed; commit.
    for (const OutPoint& prev : spent) m_utxos.erase(prev);
    for (auto& [outpoint, entry] : created) m_utxos.emplace(std::move(outpoint), std::move(entry));
    m_utxos.emplace(OutPoint{TxidOf(coinbase), 0},
                    UtxoEntry{coinbase.outputs[0].value, miner_script, std::move(coinbase_ranges), height});

    Hash256 prev_hash = m_blocks.empty() ? Hash256{} : m_blocks.back().hash;
    Block block;
    block.height = height;
    block.prev_hash = prev_hash;
    block.txs = std::move(block_txs);
    block.hash = ComputeBlockHash(height, prev_hash, block.txs);
    m_minted += subsidy;
    m_blocks.push_back(std::move(block));
    return m_blocks.back();
}

std::uint64_t ChainState::FeeOf(const Transaction& tx) const
{
    std::uint64_t in_value = 0;
    for (const TxIn& in : tx.inputs) {
        auto it = m_utxos.find(in.prevout);
        if (it == m_utxos.end()) throw ValidationError("missing input " + in.prevout.ToString());
        in_value += it->second.value;
    }
    std::uint64_t out_value = 0;
    for (const TxOut& out : tx.outputs) out_value += out.value;
    if (out_value > in_value) throw ValidationError("outputs exceed inputs");
    return in_value - out_value;
}

std::optional<ChainState::SatLocation> ChainState::LocateSatInUtxos(Sat s) const
{
    if (s.n >= m_minted) throw std::out_of_range("sat " + std::to_string(s.n) + " not yet mined");
    for (const auto& [outpoint, entry] : m_utxos) {
        if (auto offset = LocateSat(entry.ranges, s)) return SatLocation{outpoint, *offset};
    }
    return std::nullopt;
}

std::uint64_t ChainState::BalanceOf(const Script& script_pubkey) const
{
    std::uint64_t total = 0;
    for (const auto& [outpoint, entry] : m_utxos) {
        if (entry.script_pubkey == script_pubkey) total += entry.value;
    }
    return total;
}

std::vector<std::pair<OutPoint, UtxoEntry>> ChainState::ListUtxos(const Script& script_pubkey) const
{
    std::vector<std::pair<OutPoint, UtxoEntry>> found;
    for (const auto& [outpoint, entry] : m_utxos) {
        if (entry.script_pubkey == script_pubkey) found.emplace_back(outpoint, entry);
    }
    return found;
}

nlohmann::json ChainState::ToJson() const
{
    nlohmann::json j;
    j["params"] = {
        {"subsidy_interval", JsonU64(m_params.subsidy_interval)},
        {"difficulty_period", JsonU64(m_params.difficulty_period)},
        {"cycle_blocks", JsonU64(m_params.cycle_blocks)},
        {"initial_subsidy", JsonU64(m_params.initial_subsidy)},
        {"supply", JsonU64(m_params.supply)},
    };
    j["validate_signatures"] = m_validate_signatures;
    nlohmann::json blocks = nlohmann::json::array();
    for (const Block& block : m_blocks) {
        nlohmann::json txs = nlohmann::json::array();
        for (const Transaction& tx : block.txs) txs.push_back(HexEncode(SerializeFull(tx)));
        blocks.push_back({
            {"height", JsonU64(block.height)},
            {"hash", HashToHex(block.hash)},
            {"prev_hash", HashToHex(block.prev_hash)},
            {"txs", std::move(txs)},
        });
    }
    j["blocks"] = std::move(blocks);
    nlohmann::json utxos = nlohmann::json::array();
    for (const auto& [outpoint, entry] : m_utxos) {
        nlohmann::json ranges = nlohmann::json::array();
        for (const SatRange& range : entry.ranges) {
            ranges.push_back({JsonU64(range.start.n), JsonU64(range.end.n)});
        }
        utxos.push_back({
            {"txid", outpoint.txid.Hex()},
            {"vout", outpoint.vout},
            {"value", JsonU64(entry.value)},
            {"script", entry.script_pubkey.Hex()},
            {"height", JsonU64(entry.height)},
            {"ranges", std::move(ranges)},
        });
    }
    j["utxos"] = std::move(utxos);
    return j;
}

ChainState ChainState::FromJson(const nlohmann::json& j)
{
    try {
        const nlohmann::json& p = j.at("params");
        NetworkParams params{
            FieldU64(p, "subsidy_interval"), FieldU64(p, "difficulty_period"), FieldU64(p, "cycle_blocks"),
            FieldU64(p, "initial_subsidy"),  FieldU64(p, "supply"),
        };
        ChainState state(params, j.at("validate_signatures").get<bool>());
        for (const nlohmann::json& jb : j.at("blocks")) {
            Block block;
            block.height = FieldU64(jb, "height");
            block.hash = HashFromHex(jb.at("hash").get<std::string>());
            block.prev_hash = HashFromHex(jb.at("prev_hash").get<std::string>());
            for (const nlohmann::json& jt : jb.at("txs")) {
                block.txs.push_back(DeserializeTx(HexDecode(jt.get<std::string>())));
            }
            if (block.height != state.m_blocks.size()) throw ParseError("block height out of sequence");
            state.m_minted += SubsidyAtHeight(params, block.height);
            state.m_blocks.push_back(std::move(block));
        }
        for (const nlohmann::json& ju : j.at("utxos")) {
            OutPoint outpoint{Txid::FromHex(ju.at("txid").get<std::string>()), ju.at("vout").get<std::uint32_t>()};
            UtxoEntry entry;
            entry.value = FieldU64(ju, "value");
            entry.script_pubkey = Script::FromHex(ju.at("script").get<std::string>());
            entry.height = FieldU64(ju, "height");
            for (const nlohmann::json& jr : ju.at("ranges")) {
                entry.ranges.push_back(SatRange{Sat{ParseU64(jr.at(0).get<std::string>(), "range start")},
                                                Sat{ParseU64(jr.at(1).get<std::string>(), "range end")}});
            }
            if (!state.m_utxos.emplace(outpoint, std::move(entry)).second) {
                throw ParseError("duplicate utxo " + outpoint.ToString());
            }
        }
        return state;
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("chain state json: ") + err.what());
    }
}

std::vector<std::string> ChainState::VerifyInvariants() const
{
    std::vector<std::string> issues;

    std::uint64_t total_value = 0;
    std::vector<SatRange> all_ranges;
    for (const auto& [outpoint, entry] : m_utxos) {
        total_value += entry.value;
        std::uint64_t covered = 0;
        for (const SatRange& range : entry.ranges) {
            if (range.start >= range.end) {
                issues.push_back("utxo " + outpoint.ToString() + " holds an empty or inverted range");
                continue;
            }
            covered += range.Size();
            all_ranges.push_back(range);
        }
        if (covered != entry.value) {
            issues.push_back("utxo " + outpoint.ToString() + " ranges cover " + std::to_string(covered) +
                             " sats but its value is " + std::to_string(entry.value));
        }
    }
    if (total_value != m_minted) {
        issues.push_back("total UTXO value " + std::to_string(total_value) + " differs from minted " +
                         std::to_string(m_minted));
    }

    std::sort(all_ranges.begin(), all_ranges.end());
    std::uint64_t cursor = 0;
    bool partition_ok = true;
    for (const SatRange& range : all_ranges) {
        if (range.start.n != cursor) {
            issues.push_back("sat partition breaks at " + std::to_string(range.start.n) + ", expected " +
                             std::to_string(cursor));
            partition_ok = false;
            break;
        }
        cursor = range.end.n;
    }
    if (partition_ok && cursor != m_minted) {
        issues.push_back("sat partition covers " + std::to_string(cursor) + " of " + std::to_string(m_minted) +
                         " minted sats");
    }

    for (std::size_t i = 0; i < m_blocks.size(); ++i) {
        const Block& block = m_blocks[i];
        if (block.height != i) {
            issues.push_back("block " + std::to_string(i) + " records height " + std::to_string(block.height));
        }
        Hash256 expected_prev = i == 0 ? Hash256{} : m_blocks[i - 1].hash;
        if (block.prev_hash != expected_prev) {
            issues.push_back("block " + std::to_string(i) + " does not link to its predecessor");
        }
        if (block.hash != ComputeBlockHash(block.height, block.prev_hash, block.txs)) {
            issues.push_back("block " + std::to_string(i) + " hash does not match its contents");
        }
        if (block.txs.empty() || block.txs[0].inputs.size() != 1 || !IsNullOutPoint(block.txs[0].inputs[0].prevout)) {
            issues.push_back("block " + std::to_string(i) + " lacks a leading coinbase");
        }
    }

    return issues;
}

} // namespace ordforge
