// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/node.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace ordforge;

namespace {

//! Failure with a pinned process exit code: 2 usage, 3 validation, 4 state
//! corruption.
class CliFailure : public std::runtime_error {
public:
    CliFailure(int exit_code, const std::string& what) : std::runtime_error(what), m_exit_code(exit_code) {}
    int ExitCode() const { return m_exit_code; }

private:
    int m_exit_code;
};

struct GlobalOpts {
    std::string state_path = "ordforge-state.json";
    std::string keystore_path = "ordforge-keys.json";
    std::string params_name = "mainnet";
    std::string output = "json";
    bool no_sig_validation = false;
    bool relaxed_ticks = false;
};

void Emit(const GlobalOpts& opts, const json& j)
{
    if (opts.output == "table") {
        if (j.is_object()) {
            for (const auto& [key, value] : j.items()) {
                std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
            }
        } else if (j.is_array()) {
            for (const json& row : j) std::cout << row.dump() << "\n";
        } else {
            std::cout << j.dump() << "\n";
        }
    } else {
        std::cout << j.dump() << "\n";
    }
}

//! Held for the whole mutating command; advisory.
class FileLock {
public:
    explicit FileLock(const std::string& path)
    {
        m_fd = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (m_fd < 0 || ::flock(m_fd, LOCK_EX) != 0) {
            throw CliFailure(4, "cannot lock state file via " + path);
        }
    }
    ~FileLock()
    {
        if (m_fd >= 0) {
            ::flock(m_fd, LOCK_UN);
            ::close(m_fd);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int m_fd = -1;
};

NetworkParams PresetParams(const std::string& name)
{
    if (name == "mainnet") return NetworkParams::Mainnet();
    if (name == "toy") return NetworkParams::Toy();
    throw CliFailure(2, "unknown params preset: " + name);
}

Node LoadNode(const GlobalOpts& opts, bool create_if_missing)
{
    if (std::filesystem::exists(opts.state_path)) {
        try {
            return Node::Load(opts.state_path);
        } catch (const std::exception& err) {
            throw CliFailure(4, std::string("state load failed: ") + err.what());
        }
    }
    if (!create_if_missing) throw CliFailure(3, "state file not found: " + opts.state_path);
    Node node(PresetParams(opts.params_name), !opts.no_sig_validation);
    node.SetStrictTicks(!opts.relaxed_ticks);
    return node;
}

void SaveNode(const GlobalOpts& opts, const Node& node)
{
    node.Save(opts.state_path);
}

struct KeyEntry {
    std::string label;
    mpz_class secret;
    Point pubkey;
};

std::vector<KeyEntry> LoadKeystore(const GlobalOpts& opts)
{
    std::vector<KeyEntry> keys;
    if (!std::filesystem::exists(opts.keystore_path)) return keys;
    std::ifstream in(opts.keystore_path, std::ios::binary);
    if (!in) throw CliFailure(4, "cannot read keystore " + opts.keystore_path);
    json j;
    try {
        j = json::parse(in);
        if (j.at("format").get<std::string>() != "ordforge-keys-v1") {
            throw CliFailure(4, "unsupported keystore format");
        }
        const Curve& curve = DefaultCurve();
        for (const json& jk : j.at("keys")) {
            KeyEntry entry;
            entry.label = jk.at("label").get<std::string>();
            entry.secret = DecodeScalar32(HexDecode(jk.at("secret").get<std::string>()));
            entry.pubkey = curve.DecodePoint(HexDecode(jk.at("pubkey").get<std::string>()));
            keys.push_back(std::move(entry));
        }
    } catch (const CliFailure&) {
        throw;
    } catch (const std::exception& err) {
        throw CliFailure(4, std::string("keystore load failed: ") + err.what());
    }
    return keys;
}

void SaveKeystore(const GlobalOpts& opts, const std::vector<KeyEntry>& keys)
{
    const Curve& curve = DefaultCurve();
    json entries = json::array();
    for (const KeyEntry& entry : keys) {
        entries.push_back({
            {"label", entry.label},
            {"secret", HexEncode(EncodeScalar32(entry.secret))},
            {"pubkey", HexEncode(curve.EncodePoint(entry.pubkey))},
        });
    }
    json j{{"format", "ordforge-keys-v1"}, {"keys", std::move(entries)}};
    std::filesystem::path tmp = opts.keystore_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CliFailure(4, "cannot write keystore " + opts.keystore_path);
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, opts.keystore_path);
}

const KeyEntry* FindKey(const std::vector<KeyEntry>& keys, std::string_view label)
{
    for (const KeyEntry& entry : keys) {
        if (entry.label == label) return &entry;
    }
    return nullptr;
}

const KeyEntry& RequireKey(const std::vector<KeyEntry>& keys, const std::string& label)
{
    const KeyEntry* entry = FindKey(keys, label);
    if (!entry) throw CliFailure(3, "no key labeled '" + label + "' in the keystore");
    return *entry;
}

std::string AddressOf(const KeyEntry& entry)
{
    const Curve& curve = DefaultCurve();
    return HexEncode(curve.EncodePoint(TaprootOutput(curve, entry.pubkey, Hash256{}).output_key));
}

//! A destination is a keystore label or the 66-hex-character taproot output
//! key it resolves to.
Point ResolveDestination(const std::vector<KeyEntry>& keys, const std::string& dest)
{
    const Curve& curve = DefaultCurve();
    if (const KeyEntry* entry = FindKey(keys, dest)) {
        return TaprootOutput(curve, entry->pubkey, Hash256{}).output_key;
    }
    if (dest.size() == 66) {
        try {
            return curve.DecodePoint(HexDecode(dest));
        } catch (const ParseError& err) {
            throw CliFailure(3, "destination is not a valid output key: " + std::string(err.what()));
        }
    }
    throw CliFailure(3, "unknown destination '" + dest + "' (expected a key label or 66 hex characters)");
}

Script ScriptForDestination(const std::vector<KeyEntry>& keys, const std::string& dest)
{
    return TaprootScriptPubkey(DefaultCurve(), ResolveDestination(keys, dest));
}

Script OwnedScript(const KeyEntry& entry)
{
    return KeyOnlyScriptPubkey(DefaultCurve(), entry.pubkey);
}

//! Miner destination: --miner when given, else the "miner" key, created on
//! first use.
Script MinerScript(const GlobalOpts& opts, std::vector<KeyEntry>& keys, const std::string& miner_arg)
{
    if (!miner_arg.empty()) return ScriptForDestination(keys, miner_arg);
    if (const KeyEntry* entry = FindKey(keys, "miner")) return OwnedScript(*entry);
    const Curve& curve = DefaultCurve();
    KeyPair pair = curve.Keygen(SystemEntropy());
    keys.push_back(KeyEntry{"miner", pair.d, pair.Q});
    SaveKeystore(opts, keys);
    return OwnedScript(keys.back());
}

void SignKeyPath(Transaction& tx, const std::vector<const KeyEntry*>& input_keys)
{
    const Curve& curve = DefaultCurve();
    tx.witnesses.assign(tx.inputs.size(), {});
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        Hash256 sighash = SighashFor(tx, i);
        mpz_class tweaked = TweakSecret(curve, input_keys[i]->secret, Hash256{});
        Signature sig = SignDeterministic(curve, tweaked, sighash);
        tx.witnesses[i] = {EncodeSignature(curve, sig)};
    }
}

json SatInfo(const NetworkParams& params, Sat s)
{
    SatPosition pos = PositionOf(params, s);
    return json{
        {"integer", std::to_string(s.n)},
        {"decimal", SatToDecimal(params, s)},
        {"degree", RenderDegree(SatToDegree(params, s))},
        {"percentile", SatToPercentile(params, s)},
        {"name", SatToName(params, s)},
        {"rarity", RarityName(RarityOf(params, s))},
        {"height", std::to_string(pos.height)},
        {"offset", std::to_string(pos.offset)},
    };
}

Rarity RarityFromName(const std::string& name)
{
    for (Rarity r : {Rarity::Common, Rarity::Uncommon, Rarity::Rare, Rarity::Epic, Rarity::Legendary, Rarity::Mythic}) {
        if (name == RarityName(r)) return r;
    }
    throw CliFailure(3, "unknown rarity: " + name);
}

json RecordJson(const NetworkParams& params, const InscriptionRecord& record, bool with_body)
{
    json j{
        {"id", record.id},
        {"sat", std::to_string(record.sat.n)},
        {"mime", record.mime},
        {"genesis_height", std::to_string(record.genesis_height)},
        {"satpoint", record.satpoint.ToString()},
        {"rarity", RarityName(RarityOf(params, record.sat))},
    };
    if (with_body) j["body"] = HexEncode(record.body);
    return j;
}

struct FundingChoice {
    OutPoint outpoint;
    UtxoEntry entry;
};

FundingChoice PickFunding(const Node& node, const Script& owned, std::uint64_t min_value)
{
    for (const auto& [outpoint, entry] : node.Chain().ListUtxos(owned)) {
        if (entry.value >= min_value) return FundingChoice{outpoint, entry};
    }
    throw CliFailure(3, "no UTXO with at least " + std::to_string(min_value) + " sats for that key");
}

struct InscribeOutcome {
    std::string id;
    std::string commit_txid;
    std::string reveal_txid;
    std::uint64_t commit_height = 0;
    std::uint64_t reveal_height = 0;
};

InscribeOutcome RunInscription(Node& node, const KeyEntry& from, const Envelope& envelope, const Script& destination,
                               std::uint64_t fee, const Script& miner)
{
    const Curve& curve = DefaultCurve();
    std::uint64_t need = fee > (UINT64_MAX - 1) / 2 ? UINT64_MAX : 2 * fee + 1;
    FundingChoice funding = PickFunding(node, OwnedScript(from), need);
    InscriptionPlan plan =
        PlanInscription(curve, envelope, funding.outpoint, funding.entry, from.secret, destination, fee);

    InscribeOutcome outcome;
    outcome.commit_height = node.MineBlock(std::span(&plan.commit, 1), miner).height;
    outcome.reveal_height = node.MineBlock(std::span(&plan.reveal, 1), miner).height;
    outcome.id = plan.inscription_id;
    outcome.commit_txid = TxidOf(plan.commit).Hex();
    outcome.reveal_txid = TxidOf(plan.reveal).Hex();
    return outcome;
}

//! Audit verdict for one inscription: applied unless an audit entry names it.
json ApplyVerdict(const Node& node, const std::string& inscription_id)
{
    for (const AuditEntry& entry : node.Brc20().AuditLog()) {
        if (entry.inscription_id == inscription_id) {
            return json{{"applied", false}, {"reason", entry.reason}};
        }
    }
    return json{{"applied", true}};
}

Bytes ReadFileBytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure(3, "cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string data = buffer.str();
    return Bytes(data.begin(), data.end());
}

std::string OwnerIdentity(const std::vector<KeyEntry>& keys, const std::string& owner_arg)
{
    return ScriptForDestination(keys, owner_arg).Hex();
}

int Run(int argc, char** argv)
{
    GlobalOpts opts;
    CLI::App app{"ordinal sat arithmetic, inscriptions and BRC-20 tokens on a simulated chain"};
    app.require_subcommand(1);
    app.add_option("--state", opts.state_path, "state file path")->envname("ORDFORGE_STATE");
    app.add_option("--keystore", opts.keystore_path, "keystore file path")->envname("ORDFORGE_KEYSTORE");
    app.add_option("--params", opts.params_name, "network params preset for new state: mainnet | toy")
        ->check(CLI::IsMember({"mainnet", "toy"}));
    app.add_option("--output", opts.output, "output mode: json | table")->check(CLI::IsMember({"json", "table"}));
    app.add_flag("--no-sig-validation", opts.no_sig_validation, "create new state without signature validation");
    app.add_flag("--relaxed-ticks", opts.relaxed_ticks,
                 "create new state accepting any printable 4-character tick");

    // sat
    auto* cmd_sat = app.add_subcommand("sat", "show every notation and the rarity of a sat");
    std::string sat_arg;
    cmd_sat->add_option("notation", sat_arg, "integer, decimal, degree or name notation")->required();
    cmd_sat->callback([&] {
        NetworkParams params = std::filesystem::exists(opts.state_path)
                                   ? LoadNode(opts, false).Chain().Params()
                                   : PresetParams(opts.params_name);
        Emit(opts, SatInfo(params, ParseNotation(params, sat_arg)));
    });

    // keygen
    auto* cmd_keygen = app.add_subcommand("keygen", "create a key and store it in the keystore");
    std::string keygen_label;
    std::string keygen_seed;
    cmd_keygen->add_option("--label", keygen_label, "name for the key")->required();
    cmd_keygen->add_option("--seed", keygen_seed, "hex seed for reproducible key derivation");
    cmd_keygen->callback([&] {
        auto keys = LoadKeystore(opts);
        if (FindKey(keys, keygen_label)) throw CliFailure(3, "key label already exists: " + keygen_label);
        const Curve& curve = DefaultCurve();
        KeyPair pair = keygen_seed.empty() ? curve.Keygen(SystemEntropy())
                                           : curve.Keygen(DeterministicEntropy(HexDecode(keygen_seed)));
        keys.push_back(KeyEntry{keygen_label, pair.d, pair.Q});
        SaveKeystore(opts, keys);
        Emit(opts, json{{"label", keygen_label},
                        {"pubkey", HexEncode(curve.EncodePoint(pair.Q))},
                        {"address", AddressOf(keys.back())}});
    });

    // address
    auto* cmd_address = app.add_subcommand("address", "show the taproot destination of a stored key");
    std::string address_label;
    cmd_address->add_option("--label", address_label, "key label")->required();
    cmd_address->callback([&] {
        auto keys = LoadKeystore(opts);
        const KeyEntry& entry = RequireKey(keys, address_label);
        Emit(opts, json{{"label", entry.label},
                        {"pubkey", HexEncode(DefaultCurve().EncodePoint(entry.pubkey))},
                        {"address", AddressOf(entry)}});
    });

    // mine
    auto* cmd_mine = app.add_subcommand("mine", "mine one block");
    std::string mine_to;
    std::vector<std::string> mine_tx_files;
    cmd_mine->add_option("--to", mine_to, "miner destination (label or output key)");
    cmd_mine->add_option("--tx", mine_tx_files, "hex files with transactions to include");
    cmd_mine->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        Script miner = MinerScript(opts, keys, mine_to);
        std::vector<Transaction> txs;
        for (const std::string& path : mine_tx_files) {
            Bytes raw = ReadFileBytes(path);
            std::string hex(raw.begin(), raw.end());
            while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' || hex.back() == ' ')) hex.pop_back();
            txs.push_back(DeserializeTx(HexDecode(hex)));
        }
        const Block& block = node.MineBlock(txs, miner);
        std::uint64_t subsidy = SubsidyAtHeight(node.Chain().Params(), block.height);
        json txids = json::array();
        for (const Transaction& tx : block.txs) txids.push_back(TxidOf(tx).Hex());
        SaveNode(opts, node);
        Emit(opts, json{{"height", std::to_string(block.height)},
                        {"hash", HashToHex(block.hash)},
                        {"subsidy", std::to_string(subsidy)},
                        {"fees", std::to_string(block.txs[0].outputs[0].value - subsidy)},
                        {"txids", std::move(txids)}});
    });

    // send
    auto* cmd_send = app.add_subcommand("send", "key-path spend from a stored key, mined immediately");
    std::string send_from, send_to, send_miner;
    std::uint64_t send_amount = 0, send_fee = 0;
    cmd_send->add_option("--from", send_from, "sender key label")->required();
    cmd_send->add_option("--to", send_to, "destination (label or output key)")->required();
    cmd_send->add_option("--amount", send_amount, "sats to send")->required();
    cmd_send->add_option("--fee", send_fee, "fee in sats");
    cmd_send->add_option("--miner", send_miner, "miner destination for the block");
    cmd_send->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const KeyEntry& from = RequireKey(keys, send_from);
        Script owned = OwnedScript(from);

        std::uint64_t need = send_amount + send_fee;
        if (need < send_amount) throw CliFailure(3, "amount plus fee overflows");
        std::vector<std::pair<OutPoint, UtxoEntry>> utxos = node.Chain().ListUtxos(owned);
        Transaction tx;
        std::uint64_t gathered = 0;
        for (const auto& [outpoint, entry] : utxos) {
            if (gathered >= need) break;
            tx.inputs.push_back(TxIn{outpoint, FINAL_SEQUENCE});
            gathered += entry.value;
        }
        if (gathered < need) {
            throw CliFailure(3, "insufficient funds: have " + std::to_string(gathered) + ", need " +
                                    std::to_string(need));
        }
        tx.outputs.push_back(TxOut{send_amount, ScriptForDestination(keys, send_to)});
        if (gathered > need) tx.outputs.push_back(TxOut{gathered - need, owned});
        std::vector<const KeyEntry*> signers(tx.inputs.size(), &from);
        SignKeyPath(tx, signers);

        Script miner = MinerScript(opts, keys, send_miner);
        const Block& block = node.MineBlock(std::span(&tx, 1), miner);
        SaveNode(opts, node);
        Emit(opts, json{{"txid", TxidOf(tx).Hex()},
                        {"height", std::to_string(block.height)},
                        {"amount", std::to_string(send_amount)},
                        {"fee", std::to_string(send_fee)}});
    });

    // inscribe
    auto* cmd_inscribe = app.add_subcommand("inscribe", "commit and reveal an inscription over two blocks");
    std::string ins_from, ins_file, ins_mime, ins_dest, ins_miner;
    std::uint64_t ins_fee = 0;
    cmd_inscribe->add_option("--from", ins_from, "funding key label")->required();
    cmd_inscribe->add_option("--file", ins_file, "content file")->required();
    cmd_inscribe->add_option("--mime", ins_mime, "content MIME type")->required();
    cmd_inscribe->add_option("--dest", ins_dest, "inscription destination (label or output key)")->required();
    cmd_inscribe->add_option("--fee", ins_fee, "fee per transaction in sats");
    cmd_inscribe->add_option("--miner", ins_miner, "miner destination for both blocks");
    cmd_inscribe->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const KeyEntry& from = RequireKey(keys, ins_from);
        Envelope envelope{ins_mime, ReadFileBytes(ins_file)};
        Script miner = MinerScript(opts, keys, ins_miner);
        InscribeOutcome outcome =
            RunInscription(node, from, envelope, ScriptForDestination(keys, ins_dest), ins_fee, miner);
        const InscriptionRecord* record = node.Inscriptions().Get(outcome.id);
        SaveNode(opts, node);
        json j{{"inscription_id", outcome.id},
               {"commit_txid", outcome.commit_txid},
               {"reveal_txid", outcome.reveal_txid},
               {"commit_height", std::to_string(outcome.commit_height)},
               {"reveal_height", std::to_string(outcome.reveal_height)}};
        if (record) {
            j["sat"] = std::to_string(record->sat.n);
            j["satpoint"] = record->satpoint.ToString();
        }
        Emit(opts, j);
    });

    // inscriptions list/get
    auto* cmd_inscriptions = app.add_subcommand("inscriptions", "inscription index queries");
    cmd_inscriptions->require_subcommand(1);
    auto* cmd_ins_list = cmd_inscriptions->add_subcommand("list", "list inscriptions, optionally filtered");
    std::string list_mime, list_rarity;
    std::optional<std::uint64_t> list_height;
    cmd_ins_list->add_option("--mime", list_mime, "filter by MIME type");
    cmd_ins_list->add_option("--height", list_height, "filter by genesis height");
    cmd_ins_list->add_option("--rarity", list_rarity, "filter by rarity name");
    cmd_ins_list->callback([&] {
        Node node = LoadNode(opts, false);
        InscriptionFilter filter;
        if (!list_mime.empty()) filter.mime = list_mime;
        if (list_height) filter.genesis_height = *list_height;
        if (!list_rarity.empty()) filter.rarity = RarityFromName(list_rarity);
        json out = json::array();
        for (const InscriptionRecord* record : node.Inscriptions().List(node.Chain().Params(), filter)) {
            out.push_back(RecordJson(node.Chain().Params(), *record, false));
        }
        Emit(opts, out);
    });
    auto* cmd_ins_get = cmd_inscriptions->add_subcommand("get", "show one inscription");
    std::string get_id;
    cmd_ins_get->add_option("id", get_id, "inscription id")->required();
    cmd_ins_get->callback([&] {
        Node node = LoadNode(opts, false);
        const InscriptionRecord* record = node.Inscriptions().Get(get_id);
        if (!record) throw CliFailure(3, "unknown inscription id: " + get_id);
        Emit(opts, RecordJson(node.Chain().Params(), *record, true));
    });

    // sat-of
    auto* cmd_sat_of = app.add_subcommand("sat-of", "sat bound to an inscription");
    std::string sat_of_id;
    cmd_sat_of->add_option("id", sat_of_id, "inscription id")->required();
    cmd_sat_of->callback([&] {
        Node node = LoadNode(opts, false);
        const InscriptionRecord* record = node.Inscriptions().Get(sat_of_id);
        if (!record) throw CliFailure(3, "unknown inscription id: " + sat_of_id);
        json j = SatInfo(node.Chain().Params(), record->sat);
        j["id"] = record->id;
        j["satpoint"] = record->satpoint.ToString();
        Emit(opts, j);
    });

    // where
    auto* cmd_where = app.add_subcommand("where", "current location of a sat");
    std::string where_arg;
    cmd_where->add_option("sat", where_arg, "sat in any notation")->required();
    cmd_where->callback([&] {
        Node node = LoadNode(opts, false);
        const NetworkParams& params = node.Chain().Params();
        Sat s = ParseNotation(params, where_arg);
        auto location = node.Chain().LocateSatInUtxos(s);
        if (!location) throw CliFailure(4, "sat is minted but not locatable; state is corrupt");
        json ids = json::array();
        for (const InscriptionRecord& record : node.Inscriptions().Records()) {
            if (record.sat == s) ids.push_back(record.id);
        }
        Emit(opts, json{{"sat", std::to_string(s.n)},
                        {"outpoint", location->outpoint.ToString()},
                        {"offset", std::to_string(location->offset)},
                        {"owner_script", node.Chain().Utxos().at(location->outpoint).script_pubkey.Hex()},
                        {"inscriptions", std::move(ids)}});
    });

    // brc20
    auto* cmd_brc = app.add_subcommand("brc20", "BRC-20 token operations and queries");
    cmd_brc->require_subcommand(1);

    auto add_token_write_flags = [&](CLI::App* sub, std::string& from, std::uint64_t& fee, std::string& miner) {
        sub->add_option("--from", from, "key label funding and owning the inscription")->required();
        sub->add_option("--fee", fee, "fee per transaction in sats");
        sub->add_option("--miner", miner, "miner destination");
    };

    auto* cmd_deploy = cmd_brc->add_subcommand("deploy", "inscribe a deploy event");
    std::string dep_tick, dep_from, dep_miner;
    std::string dep_max, dep_lim;
    std::uint64_t dep_fee = 0;
    cmd_deploy->add_option("--tick", dep_tick, "4-character token identifier")->required();
    cmd_deploy->add_option("--max", dep_max, "maximum supply")->required();
    cmd_deploy->add_option("--lim", dep_lim, "per-mint cap (defaults to max)");
    add_token_write_flags(cmd_deploy, dep_from, dep_fee, dep_miner);
    cmd_deploy->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const KeyEntry& from = RequireKey(keys, dep_from);
        json body{{"p", "brc-20"}, {"op", "deploy"}, {"tick", dep_tick}, {"max", dep_max}};
        if (!dep_lim.empty()) body["lim"] = dep_lim;
        std::string text = body.dump();
        Envelope envelope{"text/plain;charset=utf-8", Bytes(text.begin(), text.end())};
        Script miner = MinerScript(opts, keys, dep_miner);
        InscribeOutcome outcome = RunInscription(node, from, envelope, OwnedScript(from), dep_fee, miner);
        json j = ApplyVerdict(node, outcome.id);
        SaveNode(opts, node);
        j["inscription_id"] = outcome.id;
        j["tick"] = dep_tick;
        Emit(opts, j);
    });

    auto* cmd_mint = cmd_brc->add_subcommand("mint", "inscribe a mint event");
    std::string mint_tick, mint_from, mint_miner, mint_amt;
    std::uint64_t mint_fee = 0;
    cmd_mint->add_option("--tick", mint_tick, "token identifier")->required();
    cmd_mint->add_option("--amt", mint_amt, "amount to mint")->required();
    add_token_write_flags(cmd_mint, mint_from, mint_fee, mint_miner);
    cmd_mint->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const KeyEntry& from = RequireKey(keys, mint_from);
        json body{{"p", "brc-20"}, {"op", "mint"}, {"tick", mint_tick}, {"amt", mint_amt}};
        std::string text = body.dump();
        Envelope envelope{"text/plain;charset=utf-8", Bytes(text.begin(), text.end())};
        Script miner = MinerScript(opts, keys, mint_miner);
        InscribeOutcome outcome = RunInscription(node, from, envelope, OwnedScript(from), mint_fee, miner);
        json j = ApplyVerdict(node, outcome.id);
        SaveNode(opts, node);
        j["inscription_id"] = outcome.id;
        j["tick"] = mint_tick;
        j["amt"] = mint_amt;
        Emit(opts, j);
    });

    auto* cmd_tinscribe = cmd_brc->add_subcommand("transfer-inscribe", "escrow an amount into a transfer inscription");
    std::string ti_tick, ti_from, ti_miner, ti_amt;
    std::uint64_t ti_fee = 0;
    cmd_tinscribe->add_option("--tick", ti_tick, "token identifier")->required();
    cmd_tinscribe->add_option("--amt", ti_amt, "amount to escrow")->required();
    add_token_write_flags(cmd_tinscribe, ti_from, ti_fee, ti_miner);
    cmd_tinscribe->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const KeyEntry& from = RequireKey(keys, ti_from);
        json body{{"p", "brc-20"}, {"op", "transfer"}, {"tick", ti_tick}, {"amt", ti_amt}};
        std::string text = body.dump();
        Envelope envelope{"text/plain;charset=utf-8", Bytes(text.begin(), text.end())};
        Script miner = MinerScript(opts, keys, ti_miner);
        InscribeOutcome outcome = RunInscription(node, from, envelope, OwnedScript(from), ti_fee, miner);
        json j = ApplyVerdict(node, outcome.id);
        SaveNode(opts, node);
        j["inscription_id"] = outcome.id;
        j["tick"] = ti_tick;
        j["amt"] = ti_amt;
        Emit(opts, j);
    });

    auto* cmd_tsend = cmd_brc->add_subcommand("transfer-send", "send a transfer inscription to settle it");
    std::string ts_id, ts_to, ts_miner;
    std::uint64_t ts_fee = 0;
    cmd_tsend->add_option("--id", ts_id, "transfer inscription id")->required();
    cmd_tsend->add_option("--to", ts_to, "receiver (label or output key)")->required();
    cmd_tsend->add_option("--fee", ts_fee, "fee in sats");
    cmd_tsend->add_option("--miner", ts_miner, "miner destination");
    cmd_tsend->callback([&] {
        FileLock lock(opts.state_path + ".lock");
        Node node = LoadNode(opts, true);
        auto keys = LoadKeystore(opts);
        const InscriptionRecord* record = node.Inscriptions().Get(ts_id);
        if (!record) throw CliFailure(3, "unknown inscription id: " + ts_id);
        auto utxo_it = node.Chain().Utxos().find(record->satpoint.outpoint);
        if (utxo_it == node.Chain().Utxos().end()) throw CliFailure(4, "inscription satpoint is not a live UTXO");
        const UtxoEntry& utxo = utxo_it->second;

        const KeyEntry* owner = nullptr;
        for (const KeyEntry& entry : keys) {
            if (OwnedScript(entry) == utxo.script_pubkey) {
                owner = &entry;
                break;
            }
        }
        if (!owner) throw CliFailure(3, "the inscription's UTXO is not owned by any keystore key");
        if (utxo.value <= ts_fee) throw CliFailure(3, "UTXO value does not cover the fee");

        Transaction tx;
        tx.inputs = {TxIn{record->satpoint.outpoint, FINAL_SEQUENCE}};
        tx.outputs = {TxOut{utxo.value - ts_fee, ScriptForDestination(keys, ts_to)}};
        std::vector<const KeyEntry*> signers{owner};
        SignKeyPath(tx, signers);
        Script miner = MinerScript(opts, keys, ts_miner);
        const Block& block = node.MineBlock(std::span(&tx, 1), miner);
        const PendingTransfer* credit = node.Brc20().Pending(ts_id);
        SaveNode(opts, node);
        Emit(opts, json{{"inscription_id", ts_id},
                        {"txid", TxidOf(tx).Hex()},
                        {"height", std::to_string(block.height)},
                        {"settled", credit != nullptr && credit->consumed}});
    });

    auto* cmd_balance = cmd_brc->add_subcommand("balance", "balance of an owner for a tick");
    std::string bal_tick, bal_owner;
    cmd_balance->add_option("--tick", bal_tick, "token identifier")->required();
    cmd_balance->add_option("--owner", bal_owner, "owner (label or output key)")->required();
    cmd_balance->callback([&] {
        Node node = LoadNode(opts, false);
        auto keys = LoadKeystore(opts);
        std::string identity = OwnerIdentity(keys, bal_owner);
        Brc20Balance balance = node.Brc20().BalanceOf(bal_tick, identity);
        Emit(opts, json{{"tick", bal_tick},
                        {"owner", bal_owner},
                        {"available", std::to_string(balance.available)},
                        {"transferable", std::to_string(balance.transferable)}});
    });

    auto* cmd_info = cmd_brc->add_subcommand("info", "deployed tick parameters and progress");
    std::string info_tick;
    cmd_info->add_option("--tick", info_tick, "token identifier")->required();
    cmd_info->callback([&] {
        Node node = LoadNode(opts, false);
        const TickInfo* info = node.Brc20().Info(info_tick);
        if (!info) throw CliFailure(3, "unknown tick: " + info_tick);
        Emit(opts, json{{"tick", info->tick},
                        {"max", std::to_string(info->max)},
                        {"lim", std::to_string(info->lim)},
                        {"minted", std::to_string(info->minted)},
                        {"deploy_id", info->deploy_id},
                        {"deploy_height", std::to_string(info->deploy_height)}});
    });

    auto* cmd_audit = cmd_brc->add_subcommand("audit", "inert token events with reasons");
    std::optional<std::uint64_t> audit_height;
    cmd_audit->add_option("--height", audit_height, "only entries from this height");
    cmd_audit->callback([&] {
        Node node = LoadNode(opts, false);
        json out = json::array();
        for (const AuditEntry& entry : node.Brc20().AuditLog()) {
            if (audit_height && entry.height != *audit_height) continue;
            out.push_back(json{{"height", std::to_string(entry.height)},
                               {"id", entry.inscription_id},
                               {"op", entry.op},
                               {"tick", entry.tick},
                               {"reason", entry.reason},
                               {"amount", std::to_string(entry.amount)}});
        }
        Emit(opts, out);
    });

    // export
    auto* cmd_export = app.add_subcommand("export", "dump the full state document");
    cmd_export->callback([&] {
        Node node = LoadNode(opts, false);
        std::cout << node.ToJson().dump(2) << "\n";
    });

    // verify-state
    auto* cmd_verify = app.add_subcommand("verify-state", "re-run every invariant, including a full replay");
    cmd_verify->callback([&] {
        Node node = LoadNode(opts, false);
        std::vector<std::string> issues = node.VerifyAll();
        json j{{"ok", issues.empty()}, {"issues", issues}};
        Emit(opts, j);
        if (!issues.empty()) throw CliFailure(4, "state verification failed with " +
                                                     std::to_string(issues.size()) + " issue(s)");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"code", 2}, {"error", e.what()}}.dump() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return Run(argc, argv);
    } catch (const CliFailure& err) {
        std::cerr << json{{"code", err.ExitCode()}, {"error", err.what()}}.dump() << "\n";
        return err.ExitCode();
    } catch (const ValidationError& err) {
        std::cerr << json{{"code", 3}, {"error", err.what()}}.dump() << "\n";
        return 3;
    } catch (const ParseError& err) {
        std::cerr << json{{"code", 3}, {"error", err.what()}}.dump() << "\n";
        return 3;
    } catch (const std::invalid_argument& err) {
        std::cerr << json{{"code", 3}, {"error", err.what()}}.dump() << "\n";
        return 3;
    } catch (const std::out_of_range& err) {
        std::cerr << json{{"code", 3}, {"error", err.what()}}.dump() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << json{{"code", 4}, {"error", err.what()}}.dump() << "\n";
        return 4;
    }
}
