// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/brc20.hpp>

#include <algorithm>
#include <cctype>

namespace ordforge {

std::string FoldTick(std::string_view tick)
{
    std::string folded(tick);
    std::transform(folded.begin(), folded.end(), folded.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return folded;
}

namespace {

bool TextMime(const std::string& mime)
{
    return mime == "application/json" || mime.rfind("text/", 0) == 0;
}

bool ValidTick(const std::string& tick, bool strict_letters)
{
    if (tick.size() != 4) return false;
    return std::all_of(tick.begin(), tick.end(), [&](unsigned char c) {
        if (strict_letters) return std::isalpha(c) != 0;
        return c > 0x20 && c < 0x7f;
    });
}

//! Field must be a decimal string fitting 64 bits; absent is fine, anything
//! else poisons the event.
bool ReadAmount(const nlohmann::json& j, const char* key, std::optional<std::uint64_t>& out)
{
    auto it = j.find(key);
    if (it == j.end()) return true;
    if (!it->is_string()) return false;
    try {
        out = ParseU64(it->get<std::string>(), key);
    } catch (const ParseError&) {
        return false;
    }
    return true;
}

} // namespace

std::optional<Brc20Event> ParseBrc20(const Envelope& envelope, bool strict_letters)
{
    if (!TextMime(envelope.mime)) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(envelope.body.begin(), envelope.body.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;

    if (!j.contains("p") || !j["p"].is_string() || j["p"].get<std::string>() != "brc-20") return std::nullopt;
    if (!j.contains("op") || !j["op"].is_string()) return std::nullopt;
    if (!j.contains("tick") || !j["tick"].is_string()) return std::nullopt;

    Brc20Event ev;
    ev.op = j["op"].get<std::string>();
    ev.tick = j["tick"].get<std::string>();
    if (ev.op != "deploy" && ev.op != "mint" && ev.op != "transfer") return std::nullopt;
    if (!ValidTick(ev.tick, strict_letters)) return std::nullopt;
    if (!ReadAmount(j, "max", ev.max) || !ReadAmount(j, "lim", ev.lim) || !ReadAmount(j, "amt", ev.amt)) {
        return std::nullopt;
    }
    if (ev.op == "deploy" && !ev.max) return std::nullopt;
    if ((ev.op == "mint" || ev.op == "transfer") && !ev.amt) return std::nullopt;
    return ev;
}

void Brc20State::Audit(std::uint64_t height, const std::string& id, const std::string& op, const std::string& tick,
                       const std::string& reason, std::uint64_t amount)
{
    m_audit.push_back(AuditEntry{height, id, op, tick, reason, amount});
}

bool Brc20State::ApplyDeploy(const Brc20Event& ev, const std::string& inscription_id, const std::string&,
                             std::uint64_t height)
{
    std::string key = FoldTick(ev.tick);
    std::uint64_t max = ev.max.value_or(0);
    std::uint64_t lim = ev.lim.value_or(max);
    if (m_ticks.count(key)) {
        Audit(height, inscription_id, "deploy", ev.tick, "duplicate-tick", max);
        return false;
    }
    if (max == 0) {
        Audit(height, inscription_id, "deploy", ev.tick, "zero-max", 0);
        return false;
    }
    if (lim > max) {
        Audit(height, inscription_id, "deploy", ev.tick, "lim-over-max", lim);
        return false;
    }
    m_ticks.emplace(key, TickInfo{ev.tick, max, lim, 0, inscription_id, height});
    return true;
}

bool Brc20State::ApplyMint(const Brc20Event& ev, const std::string& inscription_id, const std::string& receiver,
                           std::uint64_t height)
{
    std::string key = FoldTick(ev.tick);
    std::uint64_t amt = ev.amt.value_or(0);
    auto it = m_ticks.find(key);
    if (it == m_ticks.end()) {
        Audit(height, inscription_id, "mint", ev.tick, "unknown-tick", amt);
        return false;
    }
    TickInfo& info = it->second;
    if (amt == 0) {
        Audit(height, inscription_id, "mint", ev.tick, "zero-amount", 0);
        return false;
    }
    if (amt > info.lim) {
        Audit(height, inscription_id, "mint", ev.tick, "over-lim", amt);
        return false;
    }
    if (info.minted >= info.max) {
        Audit(height, inscription_id, "mint", ev.tick, "supply-exhausted", amt);
        return false;
    }
    std::uint64_t credit = std::min(amt, info.max - info.minted);
    m_balances[key][receiver].available += credit;
    info.minted += credit;
    return true;
}

bool Brc20State::ApplyTransferInscribe(const Brc20Event& ev, const std::string& inscription_id,
                                       const std::string& owner, std::uint64_t height)
{
    std::string key = FoldTick(ev.tick);
    std::uint64_t amt = ev.amt.value_or(0);
    if (!m_ticks.count(key)) {
        Audit(height, inscription_id, "transfer", ev.tick, "unknown-tick", amt);
        return false;
    }
    if (amt == 0) {
        Audit(height, inscription_id, "transfer", ev.tick, "zero-amount", 0);
        return false;
    }
    Brc20Balance& balance = m_balances[key][owner];
    if (amt > balance.available) {
        Audit(height, inscription_id, "transfer", ev.tick, "overdraft", amt);
        return false;
    }
    balance.available -= amt;
    balance.transferable += amt;
    m_pending.emplace(inscription_id, PendingTransfer{key, amt, owner, false});
    return true;
}

bool Brc20State::ApplyTransferSend(const std::string& inscription_id, const std::string& from, const std::string& to,
                                   std::uint64_t height)
{
    auto it = m_pending.find(inscription_id);
    if (it == m_pending.end() || it->second.consumed) return false;
    PendingTransfer& credit = it->second;
    auto tick_it = m_ticks.find(credit.tick_key);
    const std::string& tick = tick_it == m_ticks.end() ? credit.tick_key : tick_it->second.tick;
    if (credit.owner != from) {
        Audit(height, inscription_id, "transfer", tick, "owner-mismatch", credit.amount);
        return false;
    }
    Brc20Balance& sender = m_balances[credit.tick_key][credit.owner];
    if (sender.transferable < credit.amount) {
        Audit(height, inscription_id, "transfer", tick, "escrow-underflow", credit.amount);
        return false;
    }
    sender.transferable -= credit.amount;
    m_balances[credit.tick_key][to].available += credit.amount;
    credit.consumed = true;
    return true;
}

const TickInfo* Brc20State::Info(std::string_view tick) const
{
    auto it = m_ticks.find(FoldTick(tick));
    return it == m_ticks.end() ? nullptr : &it->second;
}

Brc20Balance Brc20State::BalanceOf(std::string_view tick, std::string_view owner) const
{
    auto it = m_balances.find(FoldTick(tick));
    if (it == m_balances.end()) return {};
    auto bal = it->second.find(std::string(owner));
    return bal == it->second.end() ? Brc20Balance{} : bal->second;
}

std::vector<std::pair<std::string, Brc20Balance>> Brc20State::Holders(std::string_view tick) const
{
    std::vector<std::pair<std::string, Brc20Balance>> out;
    auto it = m_balances.find(FoldTick(tick));
    if (it == m_balances.end()) return out;
    for (const auto& [owner, balance] : it->second) {
        if (balance.available > 0 || balance.transferable > 0) out.emplace_back(owner, balance);
    }
    return out;
}

std::vector<const TickInfo*> Brc20State::Ticks() const
{
    std::vector<const TickInfo*> out;
    for (const auto& [key, info] : m_ticks) out.push_back(&info);
    return out;
}

const PendingTransfer* Brc20State::Pending(std::string_view inscription_id) const
{
    auto it = m_pending.find(std::string(inscription_id));
    return it == m_pending.end() ? nullptr : &it->second;
}

std::vector<std::string> Brc20State::VerifyConservation() const
{
    std::vector<std::string> issues;
    for (const auto& [key, info] : m_ticks) {
        if (info.minted > info.max) {
            issues.push_back("tick " + key + ": minted " + std::to_string(info.minted) + " exceeds max " +
                             std::to_string(info.max));
        }
        if (info.lim > info.max) {
            issues.push_back("tick " + key + ": lim " + std::to_string(info.lim) + " exceeds max " +
                             std::to_string(info.max));
        }
        std::uint64_t available = 0;
        std::uint64_t transferable = 0;
        auto balances = m_balances.find(key);
        if (balances != m_balances.end()) {
            for (const auto& [owner, balance] : balances->second) {
                available += balance.available;
                transferable += balance.transferable;
            }
        }
        if (available + transferable != info.minted) {
            issues.push_back("tick " + key + ": balances sum to " + std::to_string(available + transferable) +
                             " but minted is " + std::to_string(info.minted));
        }
        std::uint64_t escrowed = 0;
        for (const auto& [id, credit] : m_pending) {
            if (credit.tick_key == key && !credit.consumed) escrowed += credit.amount;
        }
        if (escrowed != transferable) {
            issues.push_back("tick " + key + ": live pending credits cover " + std::to_string(escrowed) +
                             " but transferable is " + std::to_string(transferable));
        }
    }
    for (const auto& [owner_tick, owners] : m_balances) {
        if (!m_ticks.count(owner_tick)) issues.push_back("balances exist for unknown tick " + owner_tick);
    }
    return issues;
}

nlohmann::json Brc20State::ToJson() const
{
    nlohmann::json j;
    nlohmann::json ticks = nlohmann::json::array();
    for (const auto& [key, info] : m_ticks) {
        ticks.push_back({
            {"tick", info.tick},
            {"max", std::to_string(info.max)},
            {"lim", std::to_string(info.lim)},
            {"minted", std::to_string(info.minted)},
            {"deploy_id", info.deploy_id},
            {"deploy_height", std::to_string(info.deploy_height)},
        });
    }
    j["ticks"] = std::move(ticks);
    nlohmann::json balances = nlohmann::json::array();
    for (const auto& [key, owners] : m_balances) {
        for (const auto& [owner, balance] : owners) {
            balances.push_back({
                {"tick", key},
                {"owner", owner},
                {"available", std::to_string(balance.available)},
                {"transferable", std::to_string(balance.transferable)},
            });
        }
    }
    j["balances"] = std::move(balances);
    nlohmann::json pending = nlohmann::json::array();
    for (const auto& [id, credit] : m_pending) {
        pending.push_back({
            {"id", id},
            {"tick", credit.tick_key},
            {"amount", std::to_string(credit.amount)},
            {"owner", credit.owner},
            {"consumed", credit.consumed},
        });
    }
    j["pending"] = std::move(pending);
    nlohmann::json audit = nlohmann::json::array();
    for (const AuditEntry& entry : m_audit) {
        audit.push_back({
            {"height", std::to_string(entry.height)},
            {"id", entry.inscription_id},
            {"op", entry.op},
            {"tick", entry.tick},
            {"reason", entry.reason},
            {"amount", std::to_string(entry.amount)},
        });
    }
    j["audit"] = std::move(audit);
    return j;
}

Brc20State Brc20State::FromJson(const nlohmann::json& j)
{
    Brc20State state;
    try {
        for (const nlohmann::json& jt : j.at("ticks")) {
            TickInfo info;
            info.tick = jt.at("tick").get<std::string>();
            info.max = ParseU64(jt.at("max").get<std::string>(), "max");
            info.lim = ParseU64(jt.at("lim").get<std::string>(), "lim");
            info.minted = ParseU64(jt.at("minted").get<std::string>(), "minted");
            info.deploy_id = jt.at("deploy_id").get<std::string>();
            info.deploy_height = ParseU64(jt.at("deploy_height").get<std::string>(), "deploy_height");
            if (!state.m_ticks.emplace(FoldTick(info.tick), std::move(info)).second) {
                throw ParseError("duplicate tick in brc-20 state");
            }
        }
        for (const nlohmann::json& jb : j.at("balances")) {
            Brc20Balance balance;
            balance.available = ParseU64(jb.at("available").get<std::string>(), "available");
            balance.transferable = ParseU64(jb.at("transferable").get<std::string>(), "transferable");
            state.m_balances[jb.at("tick").get<std::string>()][jb.at("owner").get<std::string>()] = balance;
        }
        for (const nlohmann::json& jp : j.at("pending")) {
            PendingTransfer credit;
            credit.tick_key = jp.at("tick").get<std::string>();
            credit.amount = ParseU64(jp.at("amount").get<std::string>(), "amount");
            credit.owner = jp.at("owner").get<std::string>();
            credit.consumed = jp.at("consumed").get<bool>();
            state.m_pending.emplace(jp.at("id").get<std::string>(), std::move(credit));
        }
        for (const nlohmann::json& ja : j.at("audit")) {
            AuditEntry entry;
            entry.height = ParseU64(ja.at("height").get<std::string>(), "height");
            entry.inscription_id = ja.at("id").get<std::string>();
            entry.op = ja.at("op").get<std::string>();
            entry.tick = ja.at("tick").get<std::string>();
            entry.reason = ja.at("reason").get<std::string>();
            entry.amount = ParseU64(ja.at("amount").get<std::string>(), "amount");
            state.m_audit.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("brc-20 state json: ") + err.what());
    }
    return state;
}

Hash256 Brc20State::StateHash() const
{
    std::string dump = ToJson().dump();
    return Sha256Hash(std::span(reinterpret_cast<const std::uint8_t*>(dump.data()), dump.size()));
}

} // namespace ordforge
