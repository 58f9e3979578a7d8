// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_NODE_HPP
#define ORDFORGE_NODE_HPP

#include <ordforge/brc20.hpp>
#include <ordforge/chain.hpp>
#include <ordforge/inscribe.hpp>

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ordforge {

inline constexpr std::string_view STATE_FORMAT = "ordforge-state-v1";

//! Chain, inscription index and token ledger moving in lockstep: every mined
//! block is indexed for envelopes and its inscription movements settle
//! pending token transfers. Single writer, like its parts.
class Node {
public:
    explicit Node(NetworkParams params = NetworkParams::Mainnet(), bool validate_signatures = true);

    ChainState& Chain() { return m_chain; }
    const ChainState& Chain() const { return m_chain; }
    InscriptionIndex& Inscriptions() { return m_inscriptions; }
    const InscriptionIndex& Inscriptions() const { return m_inscriptions; }
    Brc20State& Brc20() { return m_brc20; }
    const Brc20State& Brc20() const { return m_brc20; }

    bool StrictTicks() const { return m_strict_ticks; }
    void SetStrictTicks(bool strict) { m_strict_ticks = strict; }

    //! Owner identity of a UTXO: the hex of its script_pubkey.
    std::string OwnerOf(const OutPoint& outpoint) const;

    const Block& MineBlock(std::span<const Transaction> txs, const Script& miner_script);

    nlohmann::json ToJson() const;
    static Node FromJson(const nlohmann::json& j);
    //! Atomic write (temp file + rename) of the canonical JSON document.
    void Save(const std::filesystem::path& path) const;
    //! Throws ParseError with a location for malformed files.
    static Node Load(const std::filesystem::path& path);

    //! Structural invariants of all three components plus a full replay from
    //! genesis that must reproduce the block hashes, the inscription index
    //! and the token state hash. Empty means sound.
    std::vector<std::string> VerifyAll() const;

private:
    void ApplyTokenEvents(const Block& block, const std::vector<std::string>& fresh_ids,
                          const std::map<std::string, std::pair<SatPoint, std::string>>& before);

    ChainState m_chain;
    InscriptionIndex m_inscriptions;
    Brc20State m_brc20;
    bool m_strict_ticks = true;
};

} // namespace ordforge

#endif // ORDFORGE_NODE_HPP
