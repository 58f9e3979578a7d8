// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_BRC20_HPP
#define ORDFORGE_BRC20_HPP

#include <ordforge/hash.hpp>
#include <ordforge/script.hpp>
#include <ordforge/util.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ordforge {

//! A parsed token event. Amounts are 64-bit; the wire form is decimal strings.
struct Brc20Event {
    std::string op;   // "deploy", "mint" or "transfer"
    std::string tick; // raw 4-character form
    std::optional<std::uint64_t> max;
    std::optional<std::uint64_t> lim;
    std::optional<std::uint64_t> amt;
};

//! Lower-cased tick used as the uniqueness key.
std::string FoldTick(std::string_view tick);

//! Event iff the envelope is a text type carrying a JSON object with
//! p="brc-20", a known op, a 4-character tick and well-formed decimal string
//! amounts (deploy: max + optional lim; mint/transfer: amt). Anything else is
//! nullopt, never an error. `strict_letters` restricts ticks to ASCII
//! letters; relaxed mode admits any printable non-space ASCII.
std::optional<Brc20Event> ParseBrc20(const Envelope& envelope, bool strict_letters = true);

struct TickInfo {
    std::string tick; // deployer's casing
    std::uint64_t max = 0;
    std::uint64_t lim = 0;
    std::uint64_t minted = 0;
    std::string deploy_id;
    std::uint64_t deploy_height = 0;
};

struct Brc20Balance {
    std::uint64_t available = 0;
    std::uint64_t transferable = 0;
};

struct PendingTransfer {
    std::string tick_key; // folded
    std::uint64_t amount = 0;
    std::string owner; // script identity that escrowed the amount
    bool consumed = false;
};

struct AuditEntry {
    std::uint64_t height = 0;
    std::string inscription_id;
    std::string op;
    std::string tick;
    std::string reason;
    std::uint64_t amount = 0;
};

//! Token ledger driven by inscription events. Invalid operations are inert:
//! they never throw and never touch balances, they only append an audit
//! entry. Owners are opaque script identities (hex script_pubkey).
class Brc20State {
public:
    //! Registers the tick unless the case-folded name is taken, max is zero,
    //! or lim exceeds max. Absent lim defaults to max.
    bool ApplyDeploy(const Brc20Event& ev, const std::string& inscription_id, const std::string& owner,
                     std::uint64_t height);
    //! Credits min(amt, max - minted) to the receiver. Inert on unknown tick,
    //! zero amount, amt > lim, or exhausted supply.
    bool ApplyMint(const Brc20Event& ev, const std::string& inscription_id, const std::string& receiver,
                   std::uint64_t height);
    //! Escrows amt from the owner's available into transferable and attaches
    //! the pending credit to the inscription. Inert on unknown tick, zero
    //! amount, or overdraft.
    bool ApplyTransferInscribe(const Brc20Event& ev, const std::string& inscription_id, const std::string& owner,
                               std::uint64_t height);
    //! Settles a pending credit: debits the escrowing owner's transferable,
    //! credits the receiver's available. Consumed exactly once; settling to
    //! the escrowing owner restores their available balance. Returns false
    //! without audit when the id carries no live credit.
    bool ApplyTransferSend(const std::string& inscription_id, const std::string& from, const std::string& to,
                           std::uint64_t height);

    const TickInfo* Info(std::string_view tick) const;
    Brc20Balance BalanceOf(std::string_view tick, std::string_view owner) const;
    //! Owners with a positive balance, sorted by owner identity.
    std::vector<std::pair<std::string, Brc20Balance>> Holders(std::string_view tick) const;
    std::vector<const TickInfo*> Ticks() const;
    const std::vector<AuditEntry>& AuditLog() const { return m_audit; }
    const PendingTransfer* Pending(std::string_view inscription_id) const;

    //! Per-tick conservation: available + transferable sums to minted, caps
    //! hold, escrow matches live pending credits. Empty means sound.
    std::vector<std::string> VerifyConservation() const;

    nlohmann::json ToJson() const;
    static Brc20State FromJson(const nlohmann::json& j);
    //! SHA-256 of the canonical JSON dump; equal hashes mean equal state.
    Hash256 StateHash() const;

private:
    void Audit(std::uint64_t height, const std::string& id, const std::string& op, const std::string& tick,
               const std::string& reason, std::uint64_t amount);

    std::map<std::string, TickInfo> m_ticks;                                // folded tick → info
    std::map<std::string, std::map<std::string, Brc20Balance>> m_balances; // folded tick → owner → balance
    std::map<std::string, PendingTransfer> m_pending;                      // inscription id → credit
    std::vector<AuditEntry> m_audit;
};

} // namespace ordforge

#endif // ORDFORGE_BRC20_HPP
