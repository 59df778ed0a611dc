#include "poasim/liveness.hpp"

#include "poasim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poasim {

std::uint32_t max_heartbeats(std::uint32_t interval_s) {
    if (interval_s < 10 || interval_s > 15) {
        throw ProtocolError(Errc::BadInterval, "heartbeat interval " + std::to_string(interval_s) +
                                                   " s outside [10, 15]");
    }
    return static_cast<std::uint32_t>(kEpochSeconds / interval_s);
}

std::uint32_t up_slots(const UptimeTrace& trace) {
    std::uint32_t total = 0;
    for (const auto& r : trace) total += r.end - r.begin;
    return total;
}

UptimeTrace full_uptime(std::uint32_t slots) {
    if (slots == 0) return {};
    return {SlotRange{0, slots}};
}

UptimeTrace intersect(const UptimeTrace& a, const UptimeTrace& b) {
    UptimeTrace out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const auto lo = std::max(a[i].begin, b[j].begin);
        const auto hi = std::min(a[i].end, b[j].end);
        if (lo < hi) out.push_back({lo, hi});
        if (a[i].end < b[j].end) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

UptimeGenerator::UptimeGenerator(UptimeModel model, std::uint64_t seed, std::uint32_t slots_per_epoch)
    : model_(std::move(model)), rng_(seed), slots_(slots_per_epoch) {
    if (const auto* ge = std::get_if<GilbertElliott>(&model_)) markov_up_ = ge->start_up;
}

UptimeTrace UptimeGenerator::next_epoch(EpochId epoch) {
    if (std::holds_alternative<AlwaysUp>(model_)) return full_uptime(slots_);

    if (const auto* scripted = std::get_if<ScriptedUptime>(&model_)) {
        double fraction = scripted->segments.empty() ? 1.0 : scripted->segments.back().up_fraction;
        std::uint64_t offset = epoch.index;
        for (const auto& seg : scripted->segments) {
            if (offset < seg.epochs) {
                fraction = seg.up_fraction;
                break;
            }
            offset -= seg.epochs;
        }
        fraction = std::clamp(fraction, 0.0, 1.0);
        // Small epsilon so fractions such as 0.5 map onto whole slot counts.
        const auto slots = static_cast<std::uint32_t>(std::floor(fraction * slots_ + 1e-9));
        return full_uptime(std::min(slots, slots_));
    }

    if (const auto* bern = std::get_if<EpochBernoulli>(&model_)) {
        return rng_.bernoulli(bern->p) ? full_uptime(slots_) : UptimeTrace{};
    }

    return next_markov();
}

UptimeTrace UptimeGenerator::next_markov() {
    const auto& ge = std::get<GilbertElliott>(model_);
    UptimeTrace trace;
    std::uint32_t slot = 0;
    while (slot < slots_) {
        if (markov_left_ == 0) {
            const double leave = markov_up_ ? ge.p_fail : ge.p_recover;
            markov_left_ = leave <= 0.0 ? std::numeric_limits<std::uint64_t>::max() : rng_.geometric(leave);
        }
        const auto take = static_cast<std::uint32_t>(std::min<std::uint64_t>(markov_left_, slots_ - slot));
        if (markov_up_) trace.push_back({slot, slot + take});
        slot += take;
        markov_left_ -= take;
        if (markov_left_ == 0) markov_up_ = !markov_up_;
    }
    return trace;
}

HeartbeatLog::HeartbeatLog(std::size_t oracle_count, std::uint32_t max_per_epoch)
    : oracle_count_(oracle_count), max_per_epoch_(max_per_epoch) {}

void HeartbeatLog::record(const NodeId& node, EpochId epoch, std::size_t oracle, std::uint32_t count) {
    auto& row = counts_[{epoch, node}];
    if (row.empty()) row.assign(oracle_count_, 0);
    row.at(oracle) = std::min(count, max_per_epoch_);
}

void HeartbeatLog::record_uptime(const NodeId& node, EpochId epoch, std::uint32_t slots) {
    uptime_[{epoch, node}] = std::min(slots, max_per_epoch_);
}

std::uint32_t HeartbeatLog::count(std::size_t oracle, const NodeId& node, EpochId epoch) const {
    auto it = counts_.find({epoch, node});
    return it == counts_.end() ? 0 : it->second.at(oracle);
}

std::vector<std::uint32_t> HeartbeatLog::counts(const NodeId& node, EpochId epoch) const {
    auto it = counts_.find({epoch, node});
    return it == counts_.end() ? std::vector<std::uint32_t>(oracle_count_, 0) : it->second;
}

std::uint32_t HeartbeatLog::uptime(const NodeId& node, EpochId epoch) const {
    auto it = uptime_.find({epoch, node});
    return it == uptime_.end() ? 0 : it->second;
}

void HeartbeatLog::close_epoch(EpochId epoch) {
    if (!last_closed_ || *last_closed_ < epoch) last_closed_ = epoch;
}

bool HeartbeatLog::closed(EpochId epoch) const { return last_closed_ && epoch <= *last_closed_; }

void emit_and_record(HeartbeatLog& log, const NodeId& node, EpochId epoch, const UptimeTrace& node_uptime,
                     std::span<const HeartbeatReceiver> oracles, const LossModel& loss) {
    log.record_uptime(node, epoch, up_slots(node_uptime));
    for (std::size_t i = 0; i < oracles.size(); ++i) {
        const UptimeTrace heard =
            oracles[i].uptime ? intersect(node_uptime, *oracles[i].uptime) : node_uptime;
        std::uint32_t received = 0;
        if (loss.probability <= 0.0) {
            received = up_slots(heard);
        } else {
            const std::uint64_t stream =
                derive_seed(loss.seed, "loss/" + std::string(oracles[i].label) + "/" + node.value);
            const std::uint64_t base = stream + (epoch.index << 20);
            for (const auto& range : heard) {
                for (std::uint32_t s = range.begin; s < range.end; ++s) {
                    if (hash_uniform(base + s) >= loss.probability) ++received;
                }
            }
        }
        log.record(node, epoch, i, received);
    }
}

}  // namespace poasim
