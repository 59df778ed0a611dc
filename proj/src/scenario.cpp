#include "poasim/scenario.hpp"

#include "poasim/errors.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace poasim {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& why) {
    throw ConfigError(ConfigError::Kind::Validation, path + ": " + why);
}

/// Typed view over one JSON object that rejects keys it was not told about.
class Fields {
public:
    Fields(const json& obj, std::string path, std::initializer_list<std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) invalid(path_, "expected an object");
        const std::set<std::string_view> known(allowed);
        for (const auto& [key, _] : obj_.items()) {
            if (!known.contains(key)) invalid(sub(key), "unknown field");
        }
    }

    std::string sub(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }
    bool has(std::string_view key) const { return obj_.contains(key) && !obj_.at(std::string(key)).is_null(); }
    const json& at(std::string_view key) const { return obj_.at(std::string(key)); }

    std::uint64_t uint(std::string_view key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number_unsigned()) invalid(sub(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::optional<std::uint64_t> opt_uint(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        return uint(key, 0);
    }

    std::uint32_t uint32(std::string_view key, std::uint32_t fallback) const {
        const auto v = uint(key, fallback);
        if (v > 0xFFFF'FFFFULL) invalid(sub(key), "value too large");
        return static_cast<std::uint32_t>(v);
    }

    double number(std::string_view key, double fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number()) invalid(sub(key), "expected a number");
        return v.get<double>();
    }

    double probability(std::string_view key, double fallback) const {
        const double p = number(key, fallback);
        if (!(p >= 0.0 && p <= 1.0)) invalid(sub(key), "probability must lie in [0, 1]");
        return p;
    }

    std::string string(std::string_view key, std::string fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_string()) invalid(sub(key), "expected a string");
        return v.get<std::string>();
    }

    /// Amounts are decimal strings ("1575.19") or whole-token integers.
    TokenAmount amount(std::string_view key, TokenAmount fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        std::optional<TokenAmount> parsed;
        if (v.is_string()) {
            parsed = TokenAmount::parse(v.get<std::string>());
        } else if (v.is_number_unsigned()) {
            parsed = TokenAmount::parse(std::to_string(v.get<std::uint64_t>()));
        }
        if (!parsed) invalid(sub(key), "expected a token amount (decimal string or whole number)");
        return *parsed;
    }

private:
    const json& obj_;
    std::string path_;
};

UptimeModel parse_uptime(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() == "always_up") return AlwaysUp{};
        invalid(path, "unknown uptime model '" + v.get<std::string>() + "'");
    }
    if (!v.is_object() || !v.contains("model") || !v.at("model").is_string()) {
        invalid(path, "expected an object with a 'model' string");
    }
    const std::string model = v.at("model").get<std::string>();
    if (model == "always_up") {
        Fields f(v, path, {"model"});
        return AlwaysUp{};
    }
    if (model == "scripted") {
        Fields f(v, path, {"model", "segments"});
        if (!f.has("segments") || !f.at("segments").is_array() || f.at("segments").empty()) {
            invalid(f.sub("segments"), "expected a non-empty array");
        }
        ScriptedUptime out;
        std::size_t i = 0;
        for (const auto& seg : f.at("segments")) {
            Fields s(seg, f.sub("segments") + "[" + std::to_string(i++) + "]", {"epochs", "up"});
            out.segments.push_back({s.uint("epochs", 1), s.probability("up", 1.0)});
        }
        return out;
    }
    if (model == "gilbert_elliott") {
        Fields f(v, path, {"model", "p_fail", "p_recover", "start_up"});
        GilbertElliott ge;
        ge.p_fail = f.probability("p_fail", 0.0);
        ge.p_recover = f.probability("p_recover", 1.0);
        if (f.has("start_up")) {
            if (!f.at("start_up").is_boolean()) invalid(f.sub("start_up"), "expected a boolean");
            ge.start_up = f.at("start_up").get<bool>();
        }
        if (ge.p_recover <= 0.0 && ge.p_fail > 0.0) invalid(f.sub("p_recover"), "must be positive");
        return ge;
    }
    if (model == "bernoulli") {
        Fields f(v, path, {"model", "p"});
        return EpochBernoulli{f.probability("p", 1.0)};
    }
    invalid(path + ".model", "unknown uptime model '" + model + "'");
}

std::optional<LicenseClass> parse_license(const std::string& s, const std::string& path) {
    if (s == "ND") return LicenseClass::Nd;
    if (s == "MND") return LicenseClass::Mnd;
    if (s == "GND") return LicenseClass::Gnd;
    if (s == "none") return std::nullopt;
    invalid(path, "license must be one of ND, MND, GND, none");
}

ByzantineStrategy parse_strategy(const std::string& s, const std::string& path) {
    if (s == "zero") return ByzantineStrategy::Zero;
    if (s == "max") return ByzantineStrategy::Max;
    if (s == "random") return ByzantineStrategy::Random;
    if (s == "offset") return ByzantineStrategy::Offset;
    invalid(path, "strategy must be one of zero, max, random, offset");
}

OracleConfig parse_oracles(const json& v) {
    OracleConfig out;
    if (v.is_number_unsigned()) {
        out.count = v.get<std::uint32_t>();
        return out;
    }
    Fields f(v, "oracles", {"count", "loss_probability", "uptime", "byzantine", "degraded", "costs", "cost_cap"});
    out.count = f.uint32("count", out.count);
    out.loss_probability = f.probability("loss_probability", 0.0);
    if (f.has("uptime")) out.uptime = parse_uptime(f.at("uptime"), f.sub("uptime"));
    if (f.has("byzantine")) {
        if (!f.at("byzantine").is_array()) invalid(f.sub("byzantine"), "expected an array");
        std::size_t i = 0;
        for (const auto& b : f.at("byzantine")) {
            const std::string path = f.sub("byzantine") + "[" + std::to_string(i++) + "]";
            Fields bf(b, path, {"index", "strategy", "offset", "seed"});
            OracleConfig::Byzantine byz;
            byz.index = bf.uint32("index", 0);
            byz.spec.strategy = parse_strategy(bf.string("strategy", "zero"), bf.sub("strategy"));
            byz.spec.offset = static_cast<int>(bf.number("offset", 0.0));
            byz.spec.seed = bf.uint("seed", i);
            out.byzantine.push_back(byz);
        }
    }
    if (f.has("degraded")) {
        if (!f.at("degraded").is_array()) invalid(f.sub("degraded"), "expected an array");
        std::size_t i = 0;
        for (const auto& d : f.at("degraded")) {
            const std::string path = f.sub("degraded") + "[" + std::to_string(i++) + "]";
            Fields df(d, path, {"index", "uptime"});
            if (!df.has("uptime")) invalid(df.sub("uptime"), "required");
            out.degraded.push_back({df.uint32("index", 0), parse_uptime(df.at("uptime"), df.sub("uptime"))});
        }
    }
    if (f.has("costs")) {
        if (!f.at("costs").is_array()) invalid(f.sub("costs"), "expected an array of numbers");
        for (const auto& c : f.at("costs")) {
            if (!c.is_number()) invalid(f.sub("costs"), "expected an array of numbers");
            out.costs.push_back(c.get<double>());
        }
    }
    if (f.has("cost_cap")) out.cost_cap = f.number("cost_cap", 0.0);
    return out;
}

NodeGroup parse_node_group(const json& v, const std::string& path) {
    Fields f(v, path,
             {"count", "license", "uptime", "purchase_epoch", "purchase_spacing", "kyc_revoke_epoch",
              "kyc_restore_epoch", "rebind_every", "capacity"});
    NodeGroup g;
    g.count = f.uint32("count", 1);
    g.license = parse_license(f.string("license", "ND"), f.sub("license"));
    if (f.has("uptime")) g.uptime = parse_uptime(f.at("uptime"), f.sub("uptime"));
    g.purchase_epoch = f.uint("purchase_epoch", 0);
    g.purchase_spacing = f.uint("purchase_spacing", 0);
    g.kyc_revoke_epoch = f.opt_uint("kyc_revoke_epoch");
    g.kyc_restore_epoch = f.opt_uint("kyc_restore_epoch");
    g.rebind_every = f.uint("rebind_every", 0);
    g.capacity = f.uint32("capacity", g.capacity);
    return g;
}

JobGroup parse_job_group(const json& v, const std::string& path) {
    Fields f(v, path, {"first_epoch", "every", "count", "fee", "resources", "duration"});
    JobGroup g;
    g.first_epoch = f.uint("first_epoch", 0);
    g.every = f.uint("every", 0);
    g.count = f.uint32("count", 1);
    if (!f.has("fee")) invalid(f.sub("fee"), "required");
    g.fee = f.amount("fee", {});
    g.resources = f.uint32("resources", 1);
    if (f.has("duration")) g.duration = f.uint32("duration", kDefaultJobDuration);
    return g;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Scenario parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(json_text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(ConfigError::Kind::Parse,
                          "parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what());
    }

    Fields f(root, "",
             {"duration_epochs", "heartbeat_interval_s", "rng_seed", "maturity_unlock_epoch", "nd_supply_limit",
              "nd_price_tiers", "oracles", "nodes", "jobs", "poai", "mnd_curve"});
    Scenario s;
    if (!f.has("duration_epochs")) invalid("duration_epochs", "required");
    s.duration_epochs = f.uint("duration_epochs", 0);
    s.heartbeat_interval_s = f.uint32("heartbeat_interval_s", kDefaultHeartbeatInterval);
    s.rng_seed = f.uint("rng_seed", 0);
    s.maturity_unlock_epoch = f.opt_uint("maturity_unlock_epoch");
    s.nd_supply_limit = f.uint("nd_supply_limit", kDefaultNdSupplyLimit);

    if (f.has("nd_price_tiers")) {
        if (!f.at("nd_price_tiers").is_array()) invalid("nd_price_tiers", "expected an array");
        std::size_t i = 0;
        for (const auto& t : f.at("nd_price_tiers")) {
            Fields tf(t, "nd_price_tiers[" + std::to_string(i++) + "]", {"size", "price"});
            s.nd_price_tiers.push_back({tf.uint("size", 0), tf.amount("price", {})});
        }
    }
    if (f.has("oracles")) s.oracles = parse_oracles(f.at("oracles"));

    if (f.has("nodes")) {
        const json& nodes = f.at("nodes");
        if (nodes.is_number_unsigned()) {
            NodeGroup g;
            g.count = nodes.get<std::uint32_t>();
            if (g.count > 0) s.nodes.push_back(g);
        } else if (nodes.is_array()) {
            std::size_t i = 0;
            for (const auto& n : nodes) s.nodes.push_back(parse_node_group(n, "nodes[" + std::to_string(i++) + "]"));
        } else {
            invalid("nodes", "expected a count or an array of node groups");
        }
    }
    if (f.has("jobs")) {
        if (!f.at("jobs").is_array()) invalid("jobs", "expected an array");
        std::size_t i = 0;
        for (const auto& j : f.at("jobs")) s.jobs.push_back(parse_job_group(j, "jobs[" + std::to_string(i++) + "]"));
    }
    if (f.has("poai")) {
        Fields pf(f.at("poai"), "poai", {"fee_rate", "score_alpha", "max_extension_epochs"});
        s.poai.fee_rate = pf.amount("fee_rate", {});
        s.poai.score_alpha = pf.probability("score_alpha", 0.1);
        s.poai.max_extension_epochs = pf.uint32("max_extension_epochs", s.poai.max_extension_epochs);
    }
    if (f.has("mnd_curve")) {
        Fields mf(f.at("mnd_curve"), "mnd_curve", {"cliff", "midpoint", "steepness"});
        s.mnd_curve.cliff = mf.number("cliff", s.mnd_curve.cliff);
        s.mnd_curve.midpoint = mf.number("midpoint", s.mnd_curve.midpoint);
        s.mnd_curve.steepness = mf.number("steepness", s.mnd_curve.steepness);
    }
    validate(s);
    return s;
}

Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigError::Kind::Parse, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(const Scenario& s) {
    if (s.heartbeat_interval_s < 10 || s.heartbeat_interval_s > 15) {
        invalid("heartbeat_interval_s", std::to_string(s.heartbeat_interval_s) + " outside [10, 15]");
    }
    const auto& o = s.oracles;
    if (o.count == 0) invalid("oracles.count", "at least one oracle is required");
    if (!o.byzantine.empty() && o.count < 4) {
        invalid("oracles.count", "Byzantine oracles require at least 4 oracles");
    }
    std::set<std::uint32_t> seen;
    for (const auto& b : o.byzantine) {
        if (b.index >= o.count) invalid("oracles.byzantine", "index " + std::to_string(b.index) + " out of range");
        if (!seen.insert(b.index).second) invalid("oracles.byzantine", "duplicate index " + std::to_string(b.index));
    }
    for (const auto& d : o.degraded) {
        if (d.index >= o.count) invalid("oracles.degraded", "index " + std::to_string(d.index) + " out of range");
    }
    if (!o.costs.empty() && o.costs.size() != o.count) {
        invalid("oracles.costs", "expected one cost per oracle");
    }
    std::uint64_t gnd = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& g = s.nodes[i];
        if (g.license == LicenseClass::Gnd) gnd += g.count;
        if (g.kyc_restore_epoch && (!g.kyc_revoke_epoch || *g.kyc_restore_epoch <= *g.kyc_revoke_epoch)) {
            invalid("nodes[" + std::to_string(i) + "].kyc_restore_epoch", "must follow kyc_revoke_epoch");
        }
    }
    if (gnd > 1) invalid("nodes", "at most one GND exists");
    for (std::size_t i = 0; i < s.jobs.size(); ++i) {
        if (s.jobs[i].duration == 0u) invalid("jobs[" + std::to_string(i) + "].duration", "must be positive");
    }
    if (!(s.mnd_curve.steepness > 0.0)) invalid("mnd_curve.steepness", "must be positive");
    if (!(s.mnd_curve.cliff >= 0.0 && s.mnd_curve.cliff < kMndCreditSpan)) {
        invalid("mnd_curve.cliff", "must lie in [0, 900)");
    }
    if (!(s.poai.score_alpha > 0.0)) invalid("poai.score_alpha", "must be positive");
    if (s.poai.max_extension_epochs == 0) invalid("poai.max_extension_epochs", "must be positive");
}

}  // namespace poasim
