// poasim: command-line front end for the protocol simulator.

#include "poasim/errors.hpp"
#include "poasim/event_log.hpp"
#include "poasim/report.hpp"
#include "poasim/scenario.hpp"
#include "poasim/simulator.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out) {
    const poasim::Scenario scenario = poasim::load_config(config);
    const poasim::RunResult result = poasim::run(scenario, seed.value_or(scenario.rng_seed));
    poasim::write_reports(result, out);
    std::cout << "epochs " << scenario.duration_epochs << '\n'
              << "minted " << result.ledger.minted_total().to_decimal() << '\n'
              << "burned " << result.ledger.burned_total().to_decimal() << '\n'
              << "unfinalized " << result.unfinalized << '\n'
              << "conservation " << (result.conservation_held() ? "ok" : "VIOLATED") << '\n'
              << "digest " << result.log.digest() << '\n';
    return result.conservation_held() && result.cap_held() ? kExitOk : kExitFailure;
}

int cmd_validate(const std::string& config) {
    const poasim::Scenario scenario = poasim::load_config(config);
    std::cout << "ok: " << scenario.duration_epochs << " epochs, " << scenario.nodes.size() << " node group(s), "
              << scenario.oracles.count << " oracle(s)\n";
    return kExitOk;
}

int cmd_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read " << path << '\n';
        return kExitFailure;
    }
    std::ostringstream text;
    text << in.rdbuf();
    // Parse first so a truncated or corrupt log is reported instead of hashed.
    std::cout << poasim::EventLog::parse(text.str()).digest() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic availability-protocol simulator"};
    app.require_subcommand(1);

    std::string config, out, log;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run a scenario and write reports");
    run->add_option("--config", config, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Master RNG seed (default: the scenario's rng_seed)");
    run->add_option("--out", out, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("--config", config, "Scenario JSON file")->required();

    auto* digest = app.add_subcommand("digest", "SHA-256 of an event log");
    digest->add_option("--log", log, "events.log file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(config, seed, out);
        if (*validate) return cmd_validate(config);
        return cmd_digest(log);
    } catch (const poasim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
