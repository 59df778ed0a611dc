#pragma once

#include "poasim/licensing.hpp"
#include "poasim/liveness.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace poasim {

/// Smallest byte value b with b/255 >= 0.98.
inline constexpr std::uint8_t kServiceThresholdByte = 250;

/// floor(count / Mh * 255), clamped to the byte range.
std::uint8_t local_availability(std::uint32_t count, std::uint32_t max_per_epoch);

/// Oracle participation gate on its own byte-scale availability.
inline bool self_gate(std::uint8_t self_availability) { return self_availability >= kServiceThresholdByte; }

inline bool service_flag(std::uint8_t availability) { return availability >= kServiceThresholdByte; }

/// Tolerated Byzantine oracles f = floor((total - 1) / 3); quorum is 2f + 1.
std::uint32_t fault_bound(std::uint32_t oracle_total);
std::uint32_t quorum_size(std::uint32_t oracle_total);

/// Median of byte values; for an even count, the floor of the mean of the two
/// middle values. Input need not be sorted.
std::uint8_t median_floor(std::span<const std::uint8_t> values);

struct OracleVote {
    NodeId oracle;
    NodeId node;
    EpochId epoch;
    std::uint8_t h_value = 0;
};

struct ConsensusResult {
    NodeId node;
    EpochId epoch;
    std::uint8_t availability = 0;
    bool finalized = false;
    std::vector<NodeId> eligible_oracles;  // sorted
    std::uint32_t quorum_size = 0;         // eligible votes counted
    std::uint32_t quorum_required = 0;
};

/// Quorum-gated median over votes already filtered to eligible oracles.
/// Unfinalized results carry availability 0. Throws DuplicateVote when an
/// oracle appears twice, std::invalid_argument on a vote for another
/// (node, epoch).
ConsensusResult finalize_epoch(const NodeId& node, EpochId epoch, std::span<const OracleVote> votes,
                               std::uint32_t oracle_total);

enum class ByzantineStrategy : std::uint8_t { Honest, Zero, Max, Random, Offset };

std::string_view strategy_name(ByzantineStrategy s) noexcept;

struct ByzantineSpec {
    ByzantineStrategy strategy = ByzantineStrategy::Honest;
    int offset = 0;          // Offset: added to the honest value, clamped to [0, 255]
    std::uint64_t seed = 0;  // Random: votes are a pure function of (seed, node, epoch)
};

/// Oracle membership and the vote each oracle casts given its honest reading.
class OracleSet {
public:
    OracleSet() = default;
    explicit OracleSet(std::vector<NodeId> oracles);

    std::size_t size() const { return oracles_.size(); }
    const std::vector<NodeId>& members() const { return oracles_; }
    const NodeId& at(std::size_t index) const { return oracles_.at(index); }

    /// Subsequent votes from `oracle` follow `spec`. Throws std::out_of_range
    /// for an unknown oracle.
    void inject_byzantine(const NodeId& oracle, ByzantineSpec spec);
    bool is_byzantine(std::size_t index) const;
    const ByzantineSpec& behaviour(std::size_t index) const { return specs_.at(index); }

    std::uint8_t vote(std::size_t index, std::uint8_t honest_value, const NodeId& node, EpochId epoch) const;

private:
    std::vector<NodeId> oracles_;
    std::vector<ByzantineSpec> specs_;
};

struct OracleCandidate {
    NodeId id;
    double cost = 0.0;
    double availability = 1.0;  // EMA of historical availability
};

/// Minimises estimated failure probability (1 - availability) subject to
/// cost <= cost_cap; ties go to the lowest identifier. Throws
/// NoFeasibleOracle when nothing is affordable.
NodeId select_oracle(std::span<const OracleCandidate> pool, double cost_cap);

}  // namespace poasim
