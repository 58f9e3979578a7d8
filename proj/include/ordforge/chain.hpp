// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_CHAIN_HPP
#define ORDFORGE_CHAIN_HPP

#include <ordforge/sat_math.hpp>
#include <ordforge/schnorr.hpp>
#include <ordforge/script.hpp>
#include <ordforge/tx.hpp>
#include <ordforge/util.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ordforge {

inline constexpr std::string_view TAG_SIGHASH = "ord-forge/sighash";

//! Message a spend signature commits to: the base serialization of the
//! spending tx, the input index and the spent outpoint. Witness data never
//! feeds the hash, so signing cannot invalidate sibling witnesses.
Hash256 SighashFor(const Transaction& tx, std::size_t input_index);

//! Verifies 65-byte spend signatures against 33-byte compressed keys with the
//! sighash as message. Malformed material verifies false, never throws.
class TxSignatureChecker : public SignatureChecker {
public:
    TxSignatureChecker(const Curve& curve, Hash256 sighash) : m_curve(curve), m_sighash(sighash) {}
    bool CheckSig(std::span<const std::uint8_t> sig, std::span<const std::uint8_t> pubkey) const override;

private:
    const Curve& m_curve;
    Hash256 m_sighash;
};

//! Accepts any non-empty signature; backs the signature-validation-off mode.
class AcceptingChecker : public SignatureChecker {
public:
    bool CheckSig(std::span<const std::uint8_t> sig, std::span<const std::uint8_t>) const override
    {
        return !sig.empty();
    }
};

struct UtxoEntry {
    std::uint64_t value = 0;
    Script script_pubkey;
    std::vector<SatRange> ranges;
    std::uint64_t height = 0; // confirmation height

    bool operator==(const UtxoEntry&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Hash256 hash{};
    Hash256 prev_hash{};
    std::vector<Transaction> txs; // coinbase first
};

//! `script_pubkey`s of the form [PUSH(33-byte key), OP_CHECKSIG] are treated
//! as taproot outputs: a witness whose last item is a control block (33-byte
//! internal key plus 32-byte proof hashes) spends via script path, anything
//! else runs directly against the script with the witness as initial stack.
struct SpendAnalysis {
    bool script_path = false;
    Script leaf;                    // script executed (the spk itself on key path)
    std::vector<Bytes> stack;       // initial stack for execution
    std::string rejection;          // non-empty when the spend is structurally invalid
};
SpendAnalysis AnalyzeSpend(const Curve& curve, const Script& script_pubkey, const std::vector<Bytes>& witness);

//! Linear in-memory chain. Single writer; reads may run concurrently between
//! mutations.
class ChainState {
public:
    explicit ChainState(NetworkParams params = NetworkParams::Mainnet(), bool validate_signatures = true);

    const NetworkParams& Params() const { return m_params; }
    //! Next block index, equal to the number of mined blocks.
    std::uint64_t Height() const { return m_blocks.size(); }
    const std::vector<Block>& Blocks() const { return m_blocks; }
    const std::map<OutPoint, UtxoEntry>& Utxos() const { return m_utxos; }
    //! Sats issued by all mined blocks.
    std::uint64_t TotalMinted() const { return m_minted; }

    bool ValidatesSignatures() const { return m_validate_signatures; }
    void SetValidateSignatures(bool enabled) { m_validate_signatures = enabled; }

    //! Validates `txs` against the current UTXO set (existence, no double
    //! spends, value balance, script execution, relative timelocks), then
    //! appends a block whose coinbase pays subsidy plus fees to
    //! `miner_script`. Throws ValidationError naming the offending tx.
    const Block& MineBlock(std::span<const Transaction> txs, const Script& miner_script);

    //! Fee a tx would pay against the current UTXO set.
    std::uint64_t FeeOf(const Transaction& tx) const;

    struct SatLocation {
        OutPoint outpoint;
        std::uint64_t offset; // within the UTXO's concatenated ranges
    };
    //! Current UTXO holding sat `s`. Throws std::out_of_range for sats not
    //! yet mined; nullopt is unreachable while the partition invariant holds.
    std::optional<SatLocation> LocateSatInUtxos(Sat s) const;

    std::uint64_t BalanceOf(const Script& script_pubkey) const;
    std::vector<std::pair<OutPoint, UtxoEntry>> ListUtxos(const Script& script_pubkey) const;

    nlohmann::json ToJson() const;
    static ChainState FromJson(const nlohmann::json& j);

    //! Recomputes conservation, the sat partition, per-UTXO consistency and
    //! block linkage. Returns human-readable violations; empty means sound.
    std::vector<std::string> VerifyInvariants() const;

private:
    void ValidateTx(const Transaction& tx, std::size_t index, std::uint64_t height,
                    const std::map<OutPoint, UtxoEntry>& view) const;

    NetworkParams m_params;
    bool m_validate_signatures = true;
    std::vector<Block> m_blocks;
    std::map<OutPoint, UtxoEntry> m_utxos;
    std::uint64_t m_minted = 0;
};

} // namespace ordforge

#endif // ORDFORGE_CHAIN_HPP
