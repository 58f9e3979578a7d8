// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_INSCRIBE_HPP
#define ORDFORGE_INSCRIBE_HPP

#include <ordforge/chain.hpp>
#include <ordforge/sat_math.hpp>
#include <ordforge/schnorr.hpp>
#include <ordforge/script.hpp>
#include <ordforge/tx.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ordforge {

struct SatPoint {
    OutPoint outpoint;
    std::uint64_t offset = 0; // within the UTXO's concatenated sat ranges

    std::string ToString() const { return outpoint.ToString() + ":" + std::to_string(offset); }

    bool operator==(const SatPoint&) const = default;
};

//! Everything but `satpoint` is frozen at genesis.
struct InscriptionRecord {
    std::string id; // "<reveal txid>i<output index>"
    Sat sat;
    std::string mime;
    Bytes body;
    std::uint64_t genesis_height = 0;
    SatPoint satpoint;
};

struct InscriptionFilter {
    std::optional<std::string> mime;
    std::optional<std::uint64_t> genesis_height;
    std::optional<Rarity> rarity;
};

//! First well-formed envelope in the tx's witness data, scanning inputs in
//! order and each stack bottom-up. Items that do not decode as scripts are
//! skipped.
std::optional<Envelope> ExtractEnvelope(const Transaction& tx);

//! Binds envelopes to sats and follows those sats across spends. One record
//! per reveal tx (the first envelope); a reveal whose first output carries no
//! sats indexes nothing.
class InscriptionIndex {
public:
    //! Scans a block the chain has already accepted: indexes new envelopes
    //! (bound to the first sat of the tx's first output) and refreshes every
    //! record's satpoint. Returns the new ids in tx order.
    std::vector<std::string> ProcessBlock(const ChainState& chain, const Block& block);

    const InscriptionRecord* Get(std::string_view id) const;
    //! Records in genesis order, optionally filtered.
    std::vector<const InscriptionRecord*> List(const NetworkParams& params, const InscriptionFilter& filter) const;
    const std::vector<InscriptionRecord>& Records() const { return m_records; }

    //! One issue per record whose satpoint disagrees with the chain's sat
    //! location; empty means coherent.
    std::vector<std::string> VerifyLocationCoherence(const ChainState& chain) const;

    nlohmann::json ToJson() const;
    static InscriptionIndex FromJson(const nlohmann::json& j);

private:
    std::vector<InscriptionRecord> m_records;
    std::map<std::string, std::size_t, std::less<>> m_by_id;
};

struct InscriptionPlan {
    Transaction commit;
    Transaction reveal;
    TaprootCommitment commitment; // what the commit output key commits to
    Script envelope_leaf;         // envelope followed by OP_1 so the reveal evaluates truthy
    std::string inscription_id;   // id the reveal will take once mined
};

//! Builds the commit/reveal pair: the commit spends the funding UTXO (a
//! key-only output owned by `funding_secret`) into a taproot output whose
//! single MAST leaf is the envelope script; the reveal spends it via script
//! path to `destination`. Each tx pays `fee`, so the funding value must be at
//! least 2*fee + 1. Throws ValidationError on insufficient funds and
//! std::invalid_argument when the secret does not own the funding UTXO.
InscriptionPlan PlanInscription(const Curve& curve, const Envelope& content, const OutPoint& funding_outpoint,
                                const UtxoEntry& funding_utxo, const mpz_class& funding_secret,
                                const Script& destination, std::uint64_t fee);

} // namespace ordforge

#endif // ORDFORGE_INSCRIBE_HPP
