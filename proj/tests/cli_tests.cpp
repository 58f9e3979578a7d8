// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// End-to-end tests driving the installed CLI binary as a subprocess. The
// binary path arrives via the ORDFORGE_CLI_PATH compile definition.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;

    json OutJson() const { return json::parse(out); }
    json ErrJson() const { return json::parse(err); }
};

std::string ReadAll(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

//! Isolated working directory with its own state and keystore files.
class CliSandbox {
public:
    explicit CliSandbox(const char* name)
    {
        m_dir = std::filesystem::temp_directory_path() / (std::string("ordforge-cli-") + name);
        std::filesystem::remove_all(m_dir);
        std::filesystem::create_directories(m_dir);
    }

    const std::filesystem::path& Dir() const { return m_dir; }
    std::filesystem::path StatePath() const { return m_dir / "state.json"; }
    std::filesystem::path KeystorePath() const { return m_dir / "keys.json"; }

    CliResult Run(const std::string& args) const
    {
        std::filesystem::path out_path = m_dir / "stdout.txt";
        std::filesystem::path err_path = m_dir / "stderr.txt";
        std::string cmd = std::string(ORDFORGE_CLI_PATH) + " --state " + StatePath().string() + " --keystore " +
                          KeystorePath().string() + " " + args + " >" + out_path.string() + " 2>" +
                          err_path.string();
        int status = std::system(cmd.c_str());
        CliResult result;
        result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.out = ReadAll(out_path);
        result.err = ReadAll(err_path);
        return result;
    }

    CliResult Ok(const std::string& args) const
    {
        CliResult result = Run(args);
        CAPTURE(args);
        CAPTURE(result.err);
        REQUIRE(result.code == 0);
        return result;
    }

private:
    std::filesystem::path m_dir;
};

} // namespace

TEST_CASE("sat command renders the worked example in both output modes")
{
    CliSandbox box("sat");

    json j = box.Ok("sat 1938930000000000").OutJson();
    CHECK(j.at("integer") == "1938930000000000");
    CHECK(j.at("decimal") == "792288.0");
    CHECK(j.at("degree") == "0°162288′0″0‴");
    CHECK(j.at("percentile") == "92.33000010156304%");
    CHECK(j.at("name") == "acqgzfkezav");
    CHECK(j.at("rarity") == "rare");
    CHECK(j.at("height") == "792288");
    CHECK(j.at("offset") == "0");

    // Name notation parses back to the same sat.
    json by_name = box.Ok("sat acqgzfkezav").OutJson();
    CHECK(by_name.at("integer") == "1938930000000000");
    json by_decimal = box.Ok("sat 792288.0").OutJson();
    CHECK(by_decimal.at("integer") == "1938930000000000");

    CliResult table = box.Ok("--output table sat 1938930000000000");
    CHECK(table.out.find("decimal: 792288.0") != std::string::npos);
    CHECK(table.out.find("rarity: rare") != std::string::npos);
}

TEST_CASE("exit codes separate usage, validation and corruption failures")
{
    CliSandbox box("exit-codes");

    // 2: parser-level misuse.
    CliResult unknown_cmd = box.Run("frobnicate");
    CHECK(unknown_cmd.code == 2);
    CHECK(unknown_cmd.ErrJson().at("code") == 2);
    CliResult missing_opt = box.Run("keygen");
    CHECK(missing_opt.code == 2);
    CliResult bad_preset = box.Run("--params lemonade sat 0");
    CHECK(bad_preset.code == 2);

    // 3: well-formed requests the state cannot satisfy.
    CliResult ghost_key = box.Run("address --label ghost");
    CHECK(ghost_key.code == 3);
    CHECK(ghost_key.ErrJson().at("code") == 3);
    CliResult no_state = box.Run("inscriptions list");
    CHECK(no_state.code == 3);
    CliResult bad_sat = box.Run("sat not-a-notation");
    CHECK(bad_sat.code == 3);

    box.Ok("keygen --label alice --seed 616c696365");
    CliResult dup_label = box.Run("keygen --label alice");
    CHECK(dup_label.code == 3);
    box.Ok("--params toy mine --to alice");
    CliResult poor = box.Run("send --from alice --to alice --amount 5000 --miner alice");
    CHECK(poor.code == 3);
    CHECK(poor.ErrJson().at("error").get<std::string>().find("insufficient funds") != std::string::npos);
    CliResult no_tick = box.Run("brc20 info --tick none");
    CHECK(no_tick.code == 3);

    // 4: the state file itself is unusable.
    {
        std::ofstream out(box.StatePath(), std::ios::trunc);
        out << "{\"format\": \"ordforge-state-v1\", \"chain\": ga";
    }
    CliResult corrupt = box.Run("export");
    CHECK(corrupt.code == 4);
    CHECK(corrupt.ErrJson().at("code") == 4);
    {
        std::ofstream out(box.StatePath(), std::ios::trunc);
        out << "{\"format\": \"something-else\"}\n";
    }
    CliResult wrong_format = box.Run("export");
    CHECK(wrong_format.code == 4);
}

TEST_CASE("demo flow funds keys, deploys, mints and settles a transfer")
{
    CliSandbox box("demo");
    box.Ok("keygen --label alice --seed 616c696365");
    box.Ok("keygen --label bob --seed 626f62");

    json b0 = box.Ok("--params toy mine --to alice").OutJson();
    CHECK(b0.at("height") == "0");
    CHECK(b0.at("subsidy") == "1000");
    CHECK(b0.at("fees") == "0");
    json b1 = box.Ok("mine --to alice").OutJson();
    CHECK(b1.at("height") == "1");

    json sent = box.Ok("send --from alice --to bob --amount 300 --fee 10 --miner alice").OutJson();
    CHECK(sent.at("height") == "2");
    CHECK(sent.at("amount") == "300");

    json deployed = box.Ok("brc20 deploy --tick tokn --max 1000 --lim 500 --from alice --miner alice").OutJson();
    CHECK(deployed.at("applied") == true);
    CHECK(deployed.at("tick") == "tokn");

    json minted = box.Ok("brc20 mint --tick tokn --amt 400 --from alice --miner alice").OutJson();
    CHECK(minted.at("applied") == true);

    json info = box.Ok("brc20 info --tick tokn").OutJson();
    CHECK(info.at("max") == "1000");
    CHECK(info.at("lim") == "500");
    CHECK(info.at("minted") == "400");

    json bal_after_mint = box.Ok("brc20 balance --tick tokn --owner alice").OutJson();
    CHECK(bal_after_mint.at("available") == "400");
    CHECK(bal_after_mint.at("transferable") == "0");

    json escrowed = box.Ok("brc20 transfer-inscribe --tick tokn --amt 150 --from alice --miner alice").OutJson();
    CHECK(escrowed.at("applied") == true);
    std::string transfer_id = escrowed.at("inscription_id").get<std::string>();

    json bal_escrowed = box.Ok("brc20 balance --tick tokn --owner alice").OutJson();
    CHECK(bal_escrowed.at("available") == "250");
    CHECK(bal_escrowed.at("transferable") == "150");

    json settled = box.Ok("brc20 transfer-send --id " + transfer_id + " --to bob --miner alice").OutJson();
    CHECK(settled.at("settled") == true);

    json bal_alice = box.Ok("brc20 balance --tick tokn --owner alice").OutJson();
    CHECK(bal_alice.at("available") == "250");
    CHECK(bal_alice.at("transferable") == "0");
    json bal_bob = box.Ok("brc20 balance --tick tokn --owner bob").OutJson();
    CHECK(bal_bob.at("available") == "150");
    CHECK(bal_bob.at("transferable") == "0");

    // Conservation at the CLI surface: balances sum to the minted total.
    CHECK(250 + 150 == 400);

    json listing = box.Ok("inscriptions list").OutJson();
    REQUIRE(listing.is_array());
    CHECK(listing.size() == 3);
    json record = box.Ok("inscriptions get " + transfer_id).OutJson();
    CHECK(record.at("mime") == "text/plain;charset=utf-8");
    CHECK(record.at("id") == transfer_id);

    json sat_of = box.Ok("sat-of " + transfer_id).OutJson();
    json where = box.Ok("where " + sat_of.at("integer").get<std::string>()).OutJson();
    std::string satpoint = sat_of.at("satpoint").get<std::string>();
    CHECK(satpoint.rfind(where.at("outpoint").get<std::string>(), 0) == 0);
    CHECK(where.at("inscriptions").size() == 1);
    CHECK(where.at("inscriptions")[0] == transfer_id);

    json audit = box.Ok("brc20 audit").OutJson();
    CHECK(audit.is_array());
    CHECK(audit.empty());

    json verdict = box.Ok("verify-state").OutJson();
    CHECK(verdict.at("ok") == true);
    CHECK(verdict.at("issues").empty());

    json exported = json::parse(box.Ok("export").out);
    CHECK(exported.at("format") == "ordforge-state-v1");
}

TEST_CASE("two seeded runs produce byte-identical state and export")
{
    const std::vector<std::string> script{
        "keygen --label alice --seed 616c696365",
        "keygen --label bob --seed 626f62",
        "--params toy mine --to alice",
        "mine --to alice",
        "send --from alice --to bob --amount 250 --fee 5 --miner alice",
        "brc20 deploy --tick demo --max 900 --from alice --miner alice",
        "brc20 mint --tick demo --amt 321 --from alice --miner alice",
        "inscribe --from alice --file payload.bin --mime application/octet-stream --dest bob --fee 3 --miner alice",
    };

    auto run_all = [&script](const char* name) {
        CliSandbox box(name);
        std::filesystem::path payload = box.Dir() / "payload.bin";
        std::ofstream(payload, std::ios::binary) << "identical payload";
        for (const std::string& step : script) {
            std::string args = step;
            std::size_t at = args.find("payload.bin");
            if (at != std::string::npos) args.replace(at, 11, payload.string());
            box.Ok(args);
        }
        std::string exported = box.Ok("export").out;
        return std::tuple(ReadAll(box.StatePath()), ReadAll(box.KeystorePath()), exported);
    };

    auto [state_a, keys_a, export_a] = run_all("twin-a");
    auto [state_b, keys_b, export_b] = run_all("twin-b");
    CHECK(state_a == state_b);
    CHECK(keys_a == keys_b);
    CHECK(export_a == export_b);
    CHECK(!state_a.empty());
}

TEST_CASE("verify-state detects a tampered block hash")
{
    CliSandbox box("tamper");
    box.Ok("keygen --label alice --seed 616c696365");
    box.Ok("--params toy mine --to alice");
    box.Ok("mine --to alice");
    CHECK(box.Ok("verify-state").OutJson().at("ok") == true);

    json state = json::parse(ReadAll(box.StatePath()));
    state["chain"]["blocks"][1]["hash"] = std::string(64, '0');
    {
        std::ofstream out(box.StatePath(), std::ios::trunc);
        out << state.dump(2) << "\n";
    }

    CliResult result = box.Run("verify-state");
    CHECK(result.code == 4);
    json verdict = json::parse(result.out);
    CHECK(verdict.at("ok") == false);
    REQUIRE(!verdict.at("issues").empty());
    CHECK(verdict.at("issues")[0].get<std::string>().find("chain") != std::string::npos);
}
