#include "poasim/event_log.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <memory>
#include <stdexcept>

namespace poasim {

void EventLog::append(std::uint64_t timestamp, std::string kind, std::string payload) {
    events_.push_back({timestamp, std::move(kind), std::move(payload)});
}

std::string EventLog::serialize() const {
    std::string out;
    out.reserve(events_.size() * 64);
    for (const auto& e : events_) {
        out += std::to_string(e.timestamp);
        out += '\t';
        out += e.kind;
        out += '\t';
        out += e.payload;
        out += '\n';
    }
    return out;
}

std::string EventLog::digest() const { return sha256_hex(serialize()); }

EventLog EventLog::parse(std::string_view text) {
    EventLog log;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) throw std::invalid_argument("event log: missing trailing newline");
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl + 1);
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) throw std::invalid_argument("event log: malformed line");
        std::uint64_t ts = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + t1, ts);
        if (ec != std::errc{} || ptr != line.data() + t1) throw std::invalid_argument("event log: bad timestamp");
        log.append(ts, std::string(line.substr(t1 + 1, t2 - t1 - 1)), std::string(line.substr(t2 + 1)));
    }
    return log;
}

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 0xF];
    }
    return out;
}

std::string_view payload_field(std::string_view payload, std::string_view key) {
    std::size_t pos = 0;
    while (pos < payload.size()) {
        auto end = payload.find(' ', pos);
        if (end == std::string_view::npos) end = payload.size();
        const std::string_view item = payload.substr(pos, end - pos);
        if (item.size() > key.size() && item.substr(0, key.size()) == key && item[key.size()] == '=') {
            return item.substr(key.size() + 1);
        }
        pos = end + 1;
    }
    return {};
}

void EventQueue::schedule(std::uint64_t time, int phase, Action action) {
    queue_.push({time, phase, seq_++, std::move(action)});
}

bool EventQueue::step() {
    if (queue_.empty()) return false;
    Item item = queue_.top();
    queue_.pop();
    now_ = item.time;
    item.action();
    return true;
}

void EventQueue::run_all() {
    while (step()) {
    }
}

}  // namespace poasim
