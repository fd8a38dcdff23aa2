#include "fmm/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fmm/error.hpp"

namespace fmm {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key))
            throw ConfigError(join(path, key), "unknown key");
}

double get_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(path, "must be finite");
    return d;
}

int get_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer())
        throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

Range get_range(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(path, "expected [min, max]");
    return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

Model get_model(const json& v, const std::string& path)
{
    const auto name = get_string(v, path);
    const auto m = parse_model(name);
    if (!m)
        throw ConfigError(path, "unknown model '" + name + "' (fmm, rwp_free, rwp_graph)");
    return *m;
}

std::string resolve(const std::string& base_dir, const std::string& p, const std::string& key)
{
    fs::path path(p);
    if (path.is_relative())
        path = fs::path(base_dir) / path;
    if (!fs::exists(path))
        throw ConfigError(key, "file not found: " + path.string());
    return path.string();
}

}  // namespace

void validate(const SimConfig& c)
{
    if (!(c.area_width > 0.0))
        throw ConfigError("area.width", "must be positive");
    if (!(c.area_height > 0.0))
        throw ConfigError("area.height", "must be positive");
    if (c.models.empty())
        throw ConfigError("models", "need at least one model");
    if (c.nodes < 1)
        throw ConfigError("nodes", "must be at least 1");
    if (c.classes.empty())
        throw ConfigError("classes", "need at least one class");
    double share = 0.0;
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const auto& k = c.classes[i];
        const std::string key = "classes[" + std::to_string(i) + "]";
        if (!(k.share >= 0.0))
            throw ConfigError(key + ".share", "must be non-negative");
        if (!(k.speed.min >= 0.0) || !(k.speed.max >= k.speed.min) || !(k.speed.max > 0.0))
            throw ConfigError(key + ".speed", "need 0 <= min <= max and max > 0");
        share += k.share;
    }
    if (std::abs(share - 1.0) > 1e-9)
        throw ConfigError("classes", "shares must sum to 1");
    if (!(c.pause.min >= 0.0) || !(c.pause.max >= c.pause.min) || !(c.pause.max > 0.0))
        throw ConfigError("pause", "need 0 <= min <= max and max > 0");
    if (!(c.dt > 0.0))
        throw ConfigError("dt", "must be positive");
    if (!(c.warmup >= 0.0))
        throw ConfigError("warmup", "must be non-negative");
    if (!(c.duration > c.warmup))
        throw ConfigError("duration", "must exceed warmup");
    if (!(c.snapshot_interval > 0.0))
        throw ConfigError("snapshot_interval", "must be positive");
    if (!(c.range > 0.0))
        throw ConfigError("range", "must be positive");
    if (c.sessions.count < 0)
        throw ConfigError("sessions.count", "must be non-negative");
    if (c.sessions.count > 0 && c.nodes < 2)
        throw ConfigError("sessions.count", "sessions need at least two nodes");
    if (c.sessions.packet_bytes <= 0)
        throw ConfigError("sessions.packet_bytes", "must be positive");
    if (!(c.sessions.rate > 0.0))
        throw ConfigError("sessions.rate", "must be positive");
    if (c.sessions.max_packets < 0)
        throw ConfigError("sessions.max_packets", "must be non-negative");
    if (!(c.link.bandwidth_bps > 0.0))
        throw ConfigError("link.bandwidth_bps", "must be positive");
    if (!(c.link.per_hop_latency >= 0.0))
        throw ConfigError("link.per_hop_latency", "must be non-negative");
    if (c.seeds.empty())
        throw ConfigError("seeds", "need at least one seed");
    if (!(c.p1 >= 0.0 && c.p1 <= 1.0))
        throw ConfigError("p1", "must lie in [0,1]");
    if (!(c.p2 >= 0.0 && c.p2 <= 1.0))
        throw ConfigError("p2", "must lie in [0,1]");
    if (c.time_labels.empty())
        throw ConfigError("time_centers", "need at least one time label");
    if (!(c.seconds_per_hour > 0.0))
        throw ConfigError("seconds_per_hour", "must be positive");
}

SimConfig parse_config(const std::string& json_text, const std::string& base_dir)
{
    SimConfig c;
    if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) {
        validate(c);
        return c;
    }
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(root, "",
                   {"area", "model", "models", "nodes", "classes", "pause", "duration", "warmup", "dt",
                    "snapshot_interval", "range", "sessions", "link", "seed", "seeds", "map", "rules", "priorities",
                    "table_source", "p1", "p2", "time_centers", "seconds_per_hour", "write_traces"});

    if (root.contains("area")) {
        const auto& a = root["area"];
        reject_unknown(a, "area", {"width", "height"});
        if (a.contains("width"))
            c.area_width = get_number(a["width"], "area.width");
        if (a.contains("height"))
            c.area_height = get_number(a["height"], "area.height");
    }
    if (root.contains("model") && root.contains("models"))
        throw ConfigError("model", "give either model or models");
    if (root.contains("model"))
        c.models = {get_model(root["model"], "model")};
    if (root.contains("models")) {
        const auto& m = root["models"];
        if (!m.is_array())
            throw ConfigError("models", "expected an array");
        c.models.clear();
        for (std::size_t i = 0; i < m.size(); ++i)
            c.models.push_back(get_model(m[i], "models[" + std::to_string(i) + "]"));
    }
    if (root.contains("nodes"))
        c.nodes = get_int(root["nodes"], "nodes");
    if (root.contains("classes")) {
        const auto& arr = root["classes"];
        if (!arr.is_array())
            throw ConfigError("classes", "expected an array");
        c.classes.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string key = "classes[" + std::to_string(i) + "]";
            reject_unknown(arr[i], key, {"name", "share", "speed"});
            NodeClass k;
            k.id = static_cast<int>(i);
            if (!arr[i].contains("name"))
                throw ConfigError(key + ".name", "missing");
            k.name = get_string(arr[i]["name"], key + ".name");
            k.share = arr[i].contains("share") ? get_number(arr[i]["share"], key + ".share")
                                               : 1.0 / static_cast<double>(arr.size());
            if (arr[i].contains("speed")) {
                const auto r = get_range(arr[i]["speed"], key + ".speed");
                k.speed = {r.min, r.max};
            }
            c.classes.push_back(std::move(k));
        }
    }
    if (root.contains("pause"))
        c.pause = get_range(root["pause"], "pause");
    if (root.contains("duration"))
        c.duration = get_number(root["duration"], "duration");
    if (root.contains("warmup"))
        c.warmup = get_number(root["warmup"], "warmup");
    if (root.contains("dt"))
        c.dt = get_number(root["dt"], "dt");
    if (root.contains("snapshot_interval"))
        c.snapshot_interval = get_number(root["snapshot_interval"], "snapshot_interval");
    if (root.contains("range"))
        c.range = get_number(root["range"], "range");
    if (root.contains("sessions")) {
        const auto& s = root["sessions"];
        reject_unknown(s, "sessions", {"count", "packet_bytes", "rate", "max_packets"});
        if (s.contains("count"))
            c.sessions.count = get_int(s["count"], "sessions.count");
        if (s.contains("packet_bytes"))
            c.sessions.packet_bytes = get_int(s["packet_bytes"], "sessions.packet_bytes");
        if (s.contains("rate"))
            c.sessions.rate = get_number(s["rate"], "sessions.rate");
        if (s.contains("max_packets"))
            c.sessions.max_packets = get_int(s["max_packets"], "sessions.max_packets");
    }
    if (root.contains("link")) {
        const auto& l = root["link"];
        reject_unknown(l, "link", {"bandwidth_bps", "per_hop_latency"});
        if (l.contains("bandwidth_bps"))
            c.link.bandwidth_bps = get_number(l["bandwidth_bps"], "link.bandwidth_bps");
        if (l.contains("per_hop_latency"))
            c.link.per_hop_latency = get_number(l["per_hop_latency"], "link.per_hop_latency");
    }
    if (root.contains("seed") && root.contains("seeds"))
        throw ConfigError("seed", "give either seed or seeds");
    auto read_seed = [](const json& v, const std::string& key) {
        if (!v.is_number_unsigned())
            throw ConfigError(key, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    };
    if (root.contains("seed"))
        c.seeds = {read_seed(root["seed"], "seed")};
    if (root.contains("seeds")) {
        const auto& s = root["seeds"];
        if (!s.is_array())
            throw ConfigError("seeds", "expected an array");
        c.seeds.clear();
        for (std::size_t i = 0; i < s.size(); ++i)
            c.seeds.push_back(read_seed(s[i], "seeds[" + std::to_string(i) + "]"));
    }
    if (root.contains("map") && !root["map"].is_null())
        c.map_path = resolve(base_dir, get_string(root["map"], "map"), "map");
    if (root.contains("rules") && !root["rules"].is_null())
        c.rules_path = resolve(base_dir, get_string(root["rules"], "rules"), "rules");
    if (root.contains("priorities") && !root["priorities"].is_null())
        c.priorities_path = resolve(base_dir, get_string(root["priorities"], "priorities"), "priorities");
    if (root.contains("table_source")) {
        const auto s = get_string(root["table_source"], "table_source");
        if (s == "bundled")
            c.table_source = TableSource::Bundled;
        else if (s == "derived")
            c.table_source = TableSource::Derived;
        else
            throw ConfigError("table_source", "expected bundled or derived");
    }
    if (root.contains("p1"))
        c.p1 = get_number(root["p1"], "p1");
    if (root.contains("p2"))
        c.p2 = get_number(root["p2"], "p2");
    if (root.contains("time_centers")) {
        const auto& t = root["time_centers"];
        if (!t.is_object() || t.empty())
            throw ConfigError("time_centers", "expected a non-empty object of label: hour");
        c.time_labels.clear();
        // Keep the default label order for the default names, then the rest
        // in document order.
        for (const auto& [name, value] : t.items())
            c.time_labels.push_back({name, get_number(value, "time_centers." + name)});
        const auto defaults = default_time_labels();
        std::stable_sort(c.time_labels.begin(), c.time_labels.end(), [&](const TimeLabel& a, const TimeLabel& b) {
            auto rank = [&](const TimeLabel& l) {
                for (std::size_t i = 0; i < defaults.size(); ++i)
                    if (defaults[i].name == l.name)
                        return i;
                return defaults.size();
            };
            return rank(a) < rank(b);
        });
    }
    if (root.contains("seconds_per_hour"))
        c.seconds_per_hour = get_number(root["seconds_per_hour"], "seconds_per_hour");
    if (root.contains("write_traces")) {
        if (!root["write_traces"].is_boolean())
            throw ConfigError("write_traces", "expected true or false");
        c.write_traces = root["write_traces"].get<bool>();
    }
    validate(c);
    return c;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    const auto dir = fs::path(path).parent_path();
    return parse_config(text.str(), dir.empty() ? "." : dir.string());
}

std::vector<PriorityTable> load_priorities_for(const SimConfig& config, const CityMap& map)
{
    if (config.priorities_path) {
        std::ifstream in(*config.priorities_path);
        if (!in)
            throw ConfigError("priorities", "cannot open " + *config.priorities_path);
        return load_priorities(in, config.classes, map.sites(), config.time_labels, *config.priorities_path);
    }
    return bundled_priorities(config.classes, map.sites(), config.time_labels);
}

namespace {

RuleTable resolve_rules(const SimConfig& config, const CityMap& map)
{
    if (config.table_source == TableSource::Derived) {
        const auto priorities = load_priorities_for(config, map);
        return derive_rule_table(priorities, map.sites(), map.distances(),
                                 {config.p1, config.p2, map.distances().max_dis()});
    }
    if (config.rules_path) {
        std::ifstream in(*config.rules_path);
        if (!in)
            throw ConfigError("rules", "cannot open " + *config.rules_path);
        return load_rule_table(in, config.classes, map.sites(), config.time_labels, *config.rules_path);
    }
    return bundled_rule_table(config.classes, map.sites(), config.time_labels);
}

}  // namespace

Scenario build_scenario(const SimConfig& config)
{
    validate(config);
    CityMap map = config.map_path ? load_map_file(*config.map_path) : paper_city();
    for (const auto& v : map.graph().vertices())
        if (v.x < 0.0 || v.y < 0.0 || v.x > config.area_width || v.y > config.area_height)
            throw ConfigError("map", "vertex outside the simulation area");
    for (const auto& s : map.sites())
        if (s.center.x < 0.0 || s.center.y < 0.0 || s.center.x > config.area_width ||
            s.center.y > config.area_height)
            throw ConfigError("site " + s.name, "center outside the simulation area");
    RuleTable rules = resolve_rules(config, map);

    MobilityParams mobility;
    mobility.model = config.models.front();
    mobility.classes = config.classes;
    mobility.pause = config.pause;
    mobility.area = {config.area_width, config.area_height};
    mobility.destination.labels = config.time_labels;
    mobility.destination.clock.seconds_per_hour = config.seconds_per_hour;
    return Scenario{config, std::move(map), std::move(rules), std::move(mobility)};
}

}  // namespace fmm
