// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/node.hpp>

#include <fstream>
#include <sstream>

namespace ordforge {

Node::Node(NetworkParams params, bool validate_signatures) : m_chain(params, validate_signatures) {}

std::string Node::OwnerOf(const OutPoint& outpoint) const
{
    auto it = m_chain.Utxos().find(outpoint);
    if (it == m_chain.Utxos().end()) throw std::out_of_range("unknown outpoint " + outpoint.ToString());
    return it->second.script_pubkey.Hex();
}

const Block& Node::MineBlock(std::span<const Transaction> txs, const Script& miner_script)
{
    std::map<std::string, std::pair<SatPoint, std::string>> before;
    for (const InscriptionRecord& record : m_inscriptions.Records()) {
        before.emplace(record.id, std::make_pair(record.satpoint, OwnerOf(record.satpoint.outpoint)));
    }

    const Block& block = m_chain.MineBlock(txs, miner_script);
    std::vector<std::string> fresh = m_inscriptions.ProcessBlock(m_chain, block);
    ApplyTokenEvents(block, fresh, before);
    return block;
}

void Node::ApplyTokenEvents(const Block& block, const std::vector<std::string>& fresh_ids,
                            const std::map<std::string, std::pair<SatPoint, std::string>>& before)
{
    for (const std::string& id : fresh_ids) {
        const InscriptionRecord* record = m_inscriptions.Get(id);
        std::string owner = OwnerOf(record->satpoint.outpoint);
        auto event = ParseBrc20(Envelope{record->mime, record->body}, m_strict_ticks);
        if (!event) continue;
        if (event->op == "deploy") {
            m_brc20.ApplyDeploy(*event, id, owner, block.height);
        } else if (event->op == "mint") {
            m_brc20.ApplyMint(*event, id, owner, block.height);
        } else {
            m_brc20.ApplyTransferInscribe(*event, id, owner, block.height);
        }
    }

    for (const auto& [id, was] : before) {
        const InscriptionRecord* record = m_inscriptions.Get(id);
        if (record->satpoint.outpoint == was.first.outpoint) continue;
        std::string to = OwnerOf(record->satpoint.outpoint);
        m_brc20.ApplyTransferSend(id, was.second, to, block.height);
    }
}

nlohmann::json Node::ToJson() const
{
    nlohmann::json j;
    j["format"] = std::string(STATE_FORMAT);
    j["chain"] = m_chain.ToJson();
    j["inscriptions"] = m_inscriptions.ToJson();
    j["brc20"] = m_brc20.ToJson();
    j["strict_ticks"] = m_strict_ticks;
    return j;
}

Node Node::FromJson(const nlohmann::json& j)
{
    try {
        if (j.at("format").get<std::string>() != STATE_FORMAT) {
            throw ParseError("unsupported state format, expected " + std::string(STATE_FORMAT));
        }
        Node node;
        node.m_chain = ChainState::FromJson(j.at("chain"));
        node.m_inscriptions = InscriptionIndex::FromJson(j.at("inscriptions"));
        node.m_brc20 = Brc20State::FromJson(j.at("brc20"));
        node.m_strict_ticks = j.at("strict_ticks").get<bool>();
        return node;
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("state json: ") + err.what());
    }
}

void Node::Save(const std::filesystem::path& path) const
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << ToJson().dump(2) << '\n';
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Node Node::Load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError("state file " + path.string() + ": " + err.what());
    }
    return FromJson(j);
}

std::vector<std::string> Node::VerifyAll() const
{
    std::vector<std::string> issues;

    const NetworkParams& params = m_chain.Params();
    NetworkParams recomputed =
        NetworkParams::Custom(params.subsidy_interval, params.difficulty_period, params.initial_subsidy);
    if (!(recomputed == params)) {
        issues.push_back("network params are internally inconsistent (cycle or supply mismatch)");
    }

    for (std::string& issue : m_chain.VerifyInvariants()) issues.push_back("chain: " + std::move(issue));
    for (std::string& issue : m_inscriptions.VerifyLocationCoherence(m_chain)) {
        issues.push_back("inscriptions: " + std::move(issue));
    }
    for (std::string& issue : m_brc20.VerifyConservation()) issues.push_back("brc20: " + std::move(issue));

    // Replay from genesis; every divergence is a corruption.
    Node replay(params, m_chain.ValidatesSignatures());
    replay.SetStrictTicks(m_strict_ticks);
    for (const Block& block : m_chain.Blocks()) {
        if (block.txs.empty()) {
            issues.push_back("replay: block " + std::to_string(block.height) + " has no coinbase");
            break;
        }
        std::span<const Transaction> rest(block.txs.data() + 1, block.txs.size() - 1);
        try {
            const Block& mined = replay.MineBlock(rest, block.txs[0].outputs.at(0).script_pubkey);
            if (mined.hash != block.hash) {
                issues.push_back("replay: block " + std::to_string(block.height) + " hash diverges");
                break;
            }
        } catch (const std::exception& err) {
            issues.push_back("replay: block " + std::to_string(block.height) + " rejected: " + err.what());
            break;
        }
    }
    if (issues.empty()) {
        if (replay.m_inscriptions.ToJson() != m_inscriptions.ToJson()) {
            issues.push_back("replay: inscription index diverges from stored index");
        }
        if (replay.m_brc20.StateHash() != m_brc20.StateHash()) {
            issues.push_back("replay: token state diverges from stored state");
        }
        if (replay.m_chain.ToJson() != m_chain.ToJson()) {
            issues.push_back("replay: chain state diverges from stored state");
        }
    }
    return issues;
}

} // namespace ordforge
