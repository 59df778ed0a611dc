#pragma once

#include "poasim/consensus.hpp"
#include "poasim/licensing.hpp"
#include "poasim/liveness.hpp"
#include "poasim/poa.hpp"
#include "poasim/poai.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace poasim {

struct OracleConfig {
    struct Byzantine {
        std::uint32_t index = 0;
        ByzantineSpec spec;
    };
    struct Degraded {
        std::uint32_t index = 0;
        UptimeModel uptime;
    };

    std::uint32_t count = 4;
    double loss_probability = 0.0;
    UptimeModel uptime = AlwaysUp{};
    std::vector<Byzantine> byzantine;
    std::vector<Degraded> degraded;
    std::vector<double> costs;  // one per oracle; empty means all 1.0
    std::optional<double> cost_cap;
};

/// A batch of identical simulated edge nodes.
struct NodeGroup {
    std::uint32_t count = 1;
    std::optional<LicenseClass> license = LicenseClass::Nd;
    UptimeModel uptime = AlwaysUp{};
    std::uint64_t purchase_epoch = 0;    // ND: first purchase
    std::uint64_t purchase_spacing = 0;  // ND: epochs between purchases inside the group
    std::optional<std::uint64_t> kyc_revoke_epoch{};
    std::optional<std::uint64_t> kyc_restore_epoch{};
    std::uint64_t rebind_every = 0;  // 0 disables hardware swaps
    std::uint32_t capacity = 16;     // PoAI resource units
};

struct JobGroup {
    std::uint64_t first_epoch = 0;
    std::uint64_t every = 0;
    std::uint32_t count = 1;
    TokenAmount fee{};
    std::uint32_t resources = 1;
    std::optional<std::uint32_t> duration{};
};

struct Scenario {
    std::uint64_t duration_epochs = 0;
    std::uint32_t heartbeat_interval_s = kDefaultHeartbeatInterval;
    std::uint64_t rng_seed = 0;
    std::optional<std::uint64_t> maturity_unlock_epoch;
    std::uint64_t nd_supply_limit = kDefaultNdSupplyLimit;
    std::vector<NdPriceTier> nd_price_tiers;
    OracleConfig oracles;
    std::vector<NodeGroup> nodes;
    std::vector<JobGroup> jobs;
    PoaiConfig poai;
    SigmoidParams mnd_curve;
};

/// Parses and validates a JSON scenario. Throws ConfigError: Parse with a
/// line/column for malformed JSON, Validation naming the field otherwise.
Scenario parse_config(std::string_view json_text);
Scenario load_config(const std::filesystem::path& path);

/// Re-checks semantic bounds on an in-memory scenario.
void validate(const Scenario& scenario);

}  // namespace poasim
