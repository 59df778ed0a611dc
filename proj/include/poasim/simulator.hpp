#pragma once

#include "poasim/event_log.hpp"
#include "poasim/ledger.hpp"
#include "poasim/licensing.hpp"
#include "poasim/poai.hpp"
#include "poasim/scenario.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace poasim {

/// One (node, epoch) consensus outcome as exported to epochs.csv.
struct EpochRow {
    NodeId node;
    std::uint64_t epoch = 0;
    std::optional<LicenseId> license;
    bool dauth_valid = false;
    std::vector<std::uint32_t> heartbeats;  // per oracle
    std::vector<std::uint8_t> honest_values;
    std::uint8_t availability = 0;
    bool finalized = false;
    std::uint64_t finalized_round = 0;  // epoch whose finalization round settled it
    bool defaulted = false;             // never finalized; A forced to 0
    std::uint32_t eligible_oracles = 0;
    std::uint32_t quorum_required = 0;
    std::uint32_t byzantine_votes = 0;
    TokenAmount minted;
};

struct SupplyRow {
    std::uint64_t epoch = 0;
    TokenAmount minted;
    TokenAmount burned;
    TokenAmount circulating;  // sum of every holder balance
    std::array<TokenAmount, kAllPools.size()> pools{};
    TokenAmount escrow;
    bool conserved = false;
    bool within_cap = false;
};

struct RunFlag {
    std::uint64_t epoch = 0;
    std::string kind;
    std::string detail;
};

struct RunResult {
    Scenario scenario;
    std::uint64_t seed = 0;
    EventLog log;
    SupplyLedger ledger;
    LicenseRegistry registry;
    JobBook jobs;
    std::vector<EpochRow> epochs;
    std::vector<SupplyRow> supply;
    std::vector<RunFlag> flags;
    std::map<LicenseId, std::uint64_t> completion_epoch;
    std::uint64_t unfinalized = 0;

    bool conservation_held() const;
    bool cap_held() const;
};

/// Runs the scenario deterministically. Each epoch executes, in order:
/// heartbeat generation, oracle local computation, self-gating, finalization
/// (retries of earlier epochs first), PoA accrual, PoAI monitoring and
/// settlement, supply snapshot.
RunResult run(const Scenario& scenario, std::uint64_t seed);

}  // namespace poasim
