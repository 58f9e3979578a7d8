// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/inscribe.hpp>

#include <algorithm>

namespace ordforge {

std::optional<Envelope> ExtractEnvelope(const Transaction& tx)
{
    for (const auto& stack : tx.witnesses) {
        for (const Bytes& item : stack) {
            Script script;
            try {
                script = Script::Decode(item);
            } catch (const ParseError&) {
                continue;
            }
            if (auto envelope = ParseEnvelope(script)) return envelope;
        }
    }
    return std::nullopt;
}

std::vector<std::string> InscriptionIndex::ProcessBlock(const ChainState& chain, const Block& block)
{
    std::vector<std::string> fresh;
    for (std::size_t i = 1; i < block.txs.size(); ++i) {
        const Transaction& tx = block.txs[i];
        auto envelope = ExtractEnvelope(tx);
        if (!envelope) continue;
        Txid txid = TxidOf(tx);
        OutPoint first_output{txid, 0};
        auto it = chain.Utxos().find(first_output);
        if (it == chain.Utxos().end() || it->second.ranges.empty()) continue;

        InscriptionRecord record;
        record.id = txid.Hex() + "i0";
        record.sat = it->second.ranges.front().start;
        record.mime = std::move(envelope->mime);
        record.body = std::move(envelope->body);
        record.genesis_height = block.height;
        if (m_by_id.count(record.id)) continue; // replayed block; already indexed
        m_by_id.emplace(record.id, m_records.size());
        fresh.push_back(record.id);
        m_records.push_back(std::move(record));
    }

    for (InscriptionRecord& record : m_records) {
        if (auto location = chain.LocateSatInUtxos(record.sat)) {
            record.satpoint = SatPoint{location->outpoint, location->offset};
        }
    }
    return fresh;
}

const InscriptionRecord* InscriptionIndex::Get(std::string_view id) const
{
    auto it = m_by_id.find(id);
    return it == m_by_id.end() ? nullptr : &m_records[it->second];
}

std::vector<const InscriptionRecord*> InscriptionIndex::List(const NetworkParams& params,
                                                             const InscriptionFilter& filter) const
{
    std::vector<const InscriptionRecord*> out;
    for (const InscriptionRecord& record : m_records) {
        if (filter.mime && record.mime != *filter.mime) continue;
        if (filter.genesis_height && record.genesis_height != *filter.genesis_height) continue;
        if (filter.rarity && RarityOf(params, record.sat) != *filter.rarity) continue;
        out.push_back(&record);
    }
    return out;
}

std::vector<std::string> InscriptionIndex::VerifyLocationCoherence(const ChainState& chain) const
{
    std::vector<std::string> issues;
    for (const InscriptionRecord& record : m_records) {
        auto location = chain.LocateSatInUtxos(record.sat);
        if (!location) {
            issues.push_back("inscription " + record.id + ": sat " + std::to_string(record.sat.n) +
                             " is not in any UTXO");
            continue;
        }
        SatPoint expected{location->outpoint, location->offset};
        if (!(expected == record.satpoint)) {
            issues.push_back("inscription " + record.id + ": satpoint " + record.satpoint.ToString() +
                             " but the chain locates its sat at " + expected.ToString());
        }
    }
    return issues;
}

nlohmann::json InscriptionIndex::ToJson() const
{
    nlohmann::json records = nlohmann::json::array();
    for (const InscriptionRecord& record : m_records) {
        records.push_back({
            {"id", record.id},
            {"sat", std::to_string(record.sat.n)},
            {"mime", record.mime},
            {"body", HexEncode(record.body)},
            {"genesis_height", std::to_string(record.genesis_height)},
            {"satpoint",
             {
                 {"txid", record.satpoint.outpoint.txid.Hex()},
                 {"vout", record.satpoint.outpoint.vout},
                 {"offset", std::to_string(record.satpoint.offset)},
             }},
        });
    }
    return records;
}

InscriptionIndex InscriptionIndex::FromJson(const nlohmann::json& j)
{
    InscriptionIndex index;
    try {
        for (const nlohmann::json& jr : j) {
            InscriptionRecord record;
            record.id = jr.at("id").get<std::string>();
            record.sat = Sat{ParseU64(jr.at("sat").get<std::string>(), "sat")};
            record.mime = jr.at("mime").get<std::string>();
            record.body = HexDecode(jr.at("body").get<std::string>());
            record.genesis_height = ParseU64(jr.at("genesis_height").get<std::string>(), "genesis_height");
            const nlohmann::json& sp = jr.at("satpoint");
            record.satpoint.outpoint.txid = Txid::FromHex(sp.at("txid").get<std::string>());
            record.satpoint.outpoint.vout = sp.at("vout").get<std::uint32_t>();
            record.satpoint.offset = ParseU64(sp.at("offset").get<std::string>(), "offset");
            if (!index.m_by_id.emplace(record.id, index.m_records.size()).second) {
                throw ParseError("duplicate inscription id " + record.id);
            }
            index.m_records.push_back(std::move(record));
        }
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("inscription json: ") + err.what());
    }
    return index;
}

InscriptionPlan PlanInscription(const Curve& curve, const Envelope& content, const OutPoint& funding_outpoint,
                                const UtxoEntry& funding_utxo, const mpz_class& funding_secret,
                                const Script& destination, std::uint64_t fee)
{
    if (static_cast<unsigned __int128>(funding_utxo.value) < 2 * static_cast<unsigned __int128>(fee) + 1) {
        throw ValidationError("funding value " + std::to_string(funding_utxo.value) +
                              " cannot cover two fees of " + std::to_string(fee) + " plus one sat");
    }
    Point internal_key = curve.MulG(funding_secret);
    if (!(KeyOnlyScriptPubkey(curve, internal_key) == funding_utxo.script_pubkey)) {
        throw std::invalid_argument("funding utxo is not owned by the given secret");
    }

    InscriptionPlan plan;
    // Bare envelopes evaluate falsy (the conditional consumes the empty push),
    // so the reveal leaf appends OP_1.
    plan.envelope_leaf = BuildEnvelope(content);
    plan.envelope_leaf.Add(OP_1);
    Hash256 root = MerkleRootOf(std::span(&plan.envelope_leaf, 1));
    plan.commitment = TaprootOutput(curve, internal_key, root);

    plan.commit.inputs = {TxIn{funding_outpoint, FINAL_SEQUENCE}};
    plan.commit.outputs = {TxOut{funding_utxo.value - fee, TaprootScriptPubkey(curve, plan.commitment.output_key)}};
    plan.commit.witnesses = {{}};
    Hash256 commit_sighash = SighashFor(plan.commit, 0);
    Signature commit_sig = SignDeterministic(curve, TweakSecret(curve, funding_secret, Hash256{}), commit_sighash);
    plan.commit.witnesses[0] = {EncodeSignature(curve, commit_sig)};

    plan.reveal.inputs = {TxIn{OutPoint{TxidOf(plan.commit), 0}, FINAL_SEQUENCE}};
    plan.reveal.outputs = {TxOut{funding_utxo.value - 2 * fee, destination}};
    Bytes control = curve.EncodePoint(internal_key); // single leaf, empty proof
    plan.reveal.witnesses = {{plan.envelope_leaf.Encode(), std::move(control)}};

    plan.inscription_id = TxidOf(plan.reveal).Hex() + "i0";
    return plan;
}

} // namespace ordforge
