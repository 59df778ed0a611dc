#include "poasim/consensus.hpp"

#include "poasim/errors.hpp"
#include "poasim/rng.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace poasim {

std::uint8_t local_availability(std::uint32_t count, std::uint32_t max_per_epoch) {
    if (max_per_epoch == 0) return 0;
    const std::uint64_t scaled = std::uint64_t{count} * 255 / max_per_epoch;
    return static_cast<std::uint8_t>(std::min<std::uint64_t>(scaled, 255));
}

std::uint32_t fault_bound(std::uint32_t oracle_total) { return oracle_total == 0 ? 0 : (oracle_total - 1) / 3; }

std::uint32_t quorum_size(std::uint32_t oracle_total) { return 2 * fault_bound(oracle_total) + 1; }

std::uint8_t median_floor(std::span<const std::uint8_t> values) {
    if (values.empty()) return 0;
    std::vector<std::uint8_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return static_cast<std::uint8_t>((unsigned{sorted[n / 2 - 1]} + unsigned{sorted[n / 2]}) / 2);
}

ConsensusResult finalize_epoch(const NodeId& node, EpochId epoch, std::span<const OracleVote> votes,
                               std::uint32_t oracle_total) {
    ConsensusResult result;
    result.node = node;
    result.epoch = epoch;
    result.quorum_required = quorum_size(oracle_total);

    std::set<NodeId> seen;
    std::vector<std::uint8_t> values;
    values.reserve(votes.size());
    for (const auto& v : votes) {
        if (v.node != node || v.epoch != epoch) {
            throw std::invalid_argument("vote from " + v.oracle.value + " targets a different node/epoch");
        }
        if (!seen.insert(v.oracle).second) throw ProtocolError(Errc::DuplicateVote, v.oracle.value);
        values.push_back(v.h_value);
    }
    result.eligible_oracles.assign(seen.begin(), seen.end());
    result.quorum_size = static_cast<std::uint32_t>(values.size());
    if (result.quorum_size >= result.quorum_required && !values.empty()) {
        result.finalized = true;
        result.availability = median_floor(values);
    }
    return result;
}

std::string_view strategy_name(ByzantineStrategy s) noexcept {
    switch (s) {
        case ByzantineStrategy::Honest: return "honest";
        case ByzantineStrategy::Zero: return "zero";
        case ByzantineStrategy::Max: return "max";
        case ByzantineStrategy::Random: return "random";
        case ByzantineStrategy::Offset: return "offset";
    }
    return "?";
}

OracleSet::OracleSet(std::vector<NodeId> oracles) : oracles_(std::move(oracles)), specs_(oracles_.size()) {}

void OracleSet::inject_byzantine(const NodeId& oracle, ByzantineSpec spec) {
    auto it = std::find(oracles_.begin(), oracles_.end(), oracle);
    if (it == oracles_.end()) throw std::out_of_range("unknown oracle " + oracle.value);
    specs_[static_cast<std::size_t>(it - oracles_.begin())] = spec;
}

bool OracleSet::is_byzantine(std::size_t index) const {
    return specs_.at(index).strategy != ByzantineStrategy::Honest;
}

std::uint8_t OracleSet::vote(std::size_t index, std::uint8_t honest_value, const NodeId& node,
                             EpochId epoch) const {
    const ByzantineSpec& spec = specs_.at(index);
    switch (spec.strategy) {
        case ByzantineStrategy::Honest: return honest_value;
        case ByzantineStrategy::Zero: return 0;
        case ByzantineStrategy::Max: return 255;
        case ByzantineStrategy::Random: {
            const std::uint64_t key = derive_seed(spec.seed, node.value) ^ splitmix64(epoch.index);
            return static_cast<std::uint8_t>(splitmix64(key) & 0xFF);
        }
        case ByzantineStrategy::Offset: {
            const int v = int{honest_value} + spec.offset;
            return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    return honest_value;
}

NodeId select_oracle(std::span<const OracleCandidate> pool, double cost_cap) {
    const OracleCandidate* best = nullptr;
    for (const auto& c : pool) {
        if (c.cost > cost_cap) continue;
        if (best == nullptr) {
            best = &c;
            continue;
        }
        const double failure = 1.0 - c.availability;
        const double best_failure = 1.0 - best->availability;
        if (failure < best_failure || (failure == best_failure && c.id < best->id)) best = &c;
    }
    if (best == nullptr) {
        throw ProtocolError(Errc::NoFeasibleOracle, "no oracle within cost cap " + std::to_string(cost_cap));
    }
    return best->id;
}

}  // namespace poasim
