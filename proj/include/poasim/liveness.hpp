#pragma once

#include "poasim/licensing.hpp"
#include "poasim/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace poasim {

inline constexpr std::uint64_t kEpochSeconds = 86'400;
inline constexpr std::uint32_t kDefaultHeartbeatInterval = 10;

struct EpochId {
    std::uint64_t index = 0;

    constexpr std::uint64_t start_seconds() const { return index * kEpochSeconds; }
    constexpr std::uint64_t end_seconds() const { return (index + 1) * kEpochSeconds; }
    friend auto operator<=>(const EpochId&, const EpochId&) = default;
};

/// Heartbeat slots per epoch: floor(86400 / interval). Interval must lie in
/// [10, 15] seconds, else ProtocolError(BadInterval).
std::uint32_t max_heartbeats(std::uint32_t interval_s);

/// Half-open slot range [begin, end) within one epoch.
struct SlotRange {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    friend bool operator==(const SlotRange&, const SlotRange&) = default;
};

/// Slots of one epoch during which an entity was up; sorted and disjoint.
using UptimeTrace = std::vector<SlotRange>;

std::uint32_t up_slots(const UptimeTrace& trace);
UptimeTrace full_uptime(std::uint32_t slots);
UptimeTrace intersect(const UptimeTrace& a, const UptimeTrace& b);

// Uptime models ---------------------------------------------------------------

struct AlwaysUp {};

/// Up for the leading fraction of each epoch; segment values repeat for
/// `epochs` epochs and the last segment persists past the end of the list.
struct ScriptedUptime {
    struct Segment {
        std::uint64_t epochs = 0;
        double up_fraction = 1.0;
    };
    std::vector<Segment> segments;
};

/// Two-state up/down Markov chain stepped once per heartbeat slot.
struct GilbertElliott {
    double p_fail = 0.0;     // P(up -> down) per slot
    double p_recover = 1.0;  // P(down -> up) per slot
    bool start_up = true;
};

/// Whole-epoch availability drawn i.i.d. per epoch: up with probability p.
struct EpochBernoulli {
    double p = 1.0;
};

using UptimeModel = std::variant<AlwaysUp, ScriptedUptime, GilbertElliott, EpochBernoulli>;

/// Produces successive epoch traces for one entity from its model and its own
/// random stream. Epochs must be requested in increasing order.
class UptimeGenerator {
public:
    UptimeGenerator(UptimeModel model, std::uint64_t seed, std::uint32_t slots_per_epoch);

    UptimeTrace next_epoch(EpochId epoch);

private:
    UptimeTrace next_markov();

    UptimeModel model_;
    RandomStream rng_;
    std::uint32_t slots_;
    bool markov_up_ = true;
    std::uint64_t markov_left_ = 0;  // slots remaining in the current state
};

/// Independent per-(oracle, slot) heartbeat loss.
struct LossModel {
    double probability = 0.0;
    std::uint64_t seed = 0;
};

// Heartbeat log ---------------------------------------------------------------

/// Per-epoch heartbeat counts as seen by each oracle, plus node uptime.
class HeartbeatLog {
public:
    HeartbeatLog(std::size_t oracle_count, std::uint32_t max_per_epoch);

    std::size_t oracle_count() const { return oracle_count_; }
    std::uint32_t max_per_epoch() const { return max_per_epoch_; }

    /// Stores min(count, Mh).
    void record(const NodeId& node, EpochId epoch, std::size_t oracle, std::uint32_t count);
    void record_uptime(const NodeId& node, EpochId epoch, std::uint32_t slots);

    std::uint32_t count(std::size_t oracle, const NodeId& node, EpochId epoch) const;
    /// One entry per oracle; all zero if the node emitted nothing.
    std::vector<std::uint32_t> counts(const NodeId& node, EpochId epoch) const;
    std::uint32_t uptime(const NodeId& node, EpochId epoch) const;

    void close_epoch(EpochId epoch);
    bool closed(EpochId epoch) const;

private:
    using Key = std::pair<EpochId, NodeId>;
    std::size_t oracle_count_;
    std::uint32_t max_per_epoch_;
    std::map<Key, std::vector<std::uint32_t>> counts_;
    std::map<Key, std::uint32_t> uptime_;
    std::optional<EpochId> last_closed_;
};

/// An oracle receiving heartbeats. A receiver only records in slots where it
/// is up itself; `uptime == nullptr` means up for the whole epoch.
struct HeartbeatReceiver {
    std::string_view label;
    const UptimeTrace* uptime = nullptr;
};

/// Emits the node's heartbeats for one epoch and records, per oracle, the
/// number of proofs that arrived. Each (oracle, slot) delivery is dropped
/// independently with `loss.probability`.
void emit_and_record(HeartbeatLog& log, const NodeId& node, EpochId epoch, const UptimeTrace& node_uptime,
                     std::span<const HeartbeatReceiver> oracles, const LossModel& loss);

}  // namespace poasim
