#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

namespace poasim {

struct Event {
    std::uint64_t timestamp = 0;  // simulated seconds
    std::string kind;
    std::string payload;  // space-separated key=value pairs
};

/// Append-only record of a run. The canonical serialization is one
/// "timestamp<TAB>kind<TAB>payload" line per event; the digest is the
/// SHA-256 of that text, so a written events.log hashes to the same value.
class EventLog {
public:
    void append(std::uint64_t timestamp, std::string kind, std::string payload);

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

    std::string serialize() const;
    std::string digest() const;

    /// Inverse of serialize(); throws std::invalid_argument on malformed lines.
    static EventLog parse(std::string_view text);

private:
    std::vector<Event> events_;
};

std::string sha256_hex(std::string_view data);

/// Looks up `key` in a key=value payload; empty if absent.
std::string_view payload_field(std::string_view payload, std::string_view key);

/// Single-threaded discrete-event scheduler. Events fire in (time, phase,
/// insertion) order, so same-time events are ordered by phase first.
class EventQueue {
public:
    using Action = std::function<void()>;

    void schedule(std::uint64_t time, int phase, Action action);
    /// Runs the next event; false when the queue is empty.
    bool step();
    void run_all();

    std::uint64_t now() const { return now_; }
    bool empty() const { return queue_.empty(); }

private:
    struct Item {
        std::uint64_t time;
        int phase;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.time != b.time) return a.time > b.time;
            if (a.phase != b.phase) return a.phase > b.phase;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Item, std::vector<Item>, Later> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t now_ = 0;
};

}  // namespace poasim
