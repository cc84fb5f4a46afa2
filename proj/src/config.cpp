#include "relsen/config.hpp"
#include "relsen/csv.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "relsen/errors.hpp"

namespace relsen {

Config Config::defaults_for(const Topology& topology) {
    Config c;
    for (std::size_t p = 0; p < topology.process_count(); ++p) {
        const std::size_t hard = topology.sensors_of(p).size();
        c.soft_sensors.push_back(hard >= 5 ? 0 : 5 - hard);
        c.gamma.push_back(1.0);
    }
    return c;
}

void Config::validate(const Topology& topology) const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(ratio > 0.0 && ratio <= 1.0)) fail("ratio r must lie in (0, 1]");
    if (neighbors == 0) fail("neighbor count K must be positive");
    if (window == 0) fail("window length l must be positive");
    if (warmup_length == 0) fail("warm-up length T must be positive");
    if (warmup_length <= std::max(neighbors, window)) {
        fail("warm-up length T=" + std::to_string(warmup_length) +
             " must exceed max(K, l)=" + std::to_string(std::max(neighbors, window)));
    }
    if (!(epsilon > 0.0)) fail("epsilon must be positive");
    if (history_capacity < neighbors)
        fail("history_capacity must be at least K=" + std::to_string(neighbors));
    if (max_warmup_iterations == 0) fail("max_warmup_iterations must be positive");
    if (soft_sensors.size() != topology.process_count())
        fail("soft sensor counts must be given for every process");
    if (gamma.size() != topology.process_count())
        fail("gamma must be given for every process");
    for (std::size_t p = 0; p < topology.process_count(); ++p) {
        if (!(gamma[p] >= 0.0) || !std::isfinite(gamma[p]))
            fail("gamma for process '" + topology.process_name(p) + "' must be finite and >= 0");
        if (soft_sensors[p] > 0 && topology.foreign_sensor_count(p) == 0)
            fail("process '" + topology.process_name(p) +
                 "' requests soft sensors but no other process has sensors");
    }
}

namespace {

struct Located : ConfigError {
    Located(const std::string& origin, const YAML::Node& node, const std::string& msg)
        : ConfigError(origin + ":" + std::to_string(node.Mark().line + 1) + ": " + msg) {}
};

template <typename T>
T scalar(const std::string& origin, const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw Located(origin, node, "'" + key + "' must be a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw Located(origin, node, "invalid value '" + node.Scalar() + "' for '" + key + "'");
    }
}

std::size_t count(const std::string& origin, const YAML::Node& node, const std::string& key) {
    const auto v = scalar<long long>(origin, node, key);
    if (v < 0) throw Located(origin, node, "'" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

// Reads a per-process section `{default: v, <process>: v, ...}`.
template <typename T, typename Read>
std::vector<T> per_process(const std::string& origin, const YAML::Node& section,
                           const std::string& key, const Topology& topology,
                           std::vector<T> fallback, Read read) {
    if (!section) return fallback;
    if (!section.IsMap()) throw Located(origin, section, "'" + key + "' must be a mapping");
    if (auto d = section["default"]) {
        std::fill(fallback.begin(), fallback.end(), read(d, key + ".default"));
    }
    for (const auto& kv : section) {
        const auto name = kv.first.as<std::string>();
        if (name == "default") continue;
        auto p = topology.find_process(name);
        if (!p) throw Located(origin, kv.first, "unknown process '" + name + "' in '" + key + "'");
        fallback[*p] = read(kv.second, key + "." + name);
    }
    return fallback;
}

}  // namespace

EngineSetup parse_config(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(origin + ": top level must be a mapping");

    static const std::set<std::string> known_top = {"processes", "engine", "soft_sensors", "gamma"};
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!known_top.count(key)) throw Located(origin, kv.first, "unknown section '" + key + "'");
    }

    const auto procs = root["processes"];
    if (!procs) throw ConfigError(origin + ": missing 'processes' section");
    if (!procs.IsMap() || procs.size() == 0)
        throw Located(origin, procs, "'processes' must map each process to its sensor list");

    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto& kv : procs) {
        const auto name = kv.first.as<std::string>();
        if (!kv.second.IsSequence() || kv.second.size() == 0)
            throw Located(origin, kv.second, "process '" + name + "' needs a non-empty sensor list");
        std::vector<std::string> members;
        for (const auto& s : kv.second) members.push_back(scalar<std::string>(origin, s, name));
        groups.emplace_back(name, std::move(members));
    }

    Topology topology;
    try {
        topology = Topology::from_groups(groups);
    } catch (const ConfigError& e) {
        throw Located(origin, procs, e.what());
    }

    Config cfg = Config::defaults_for(topology);
    if (auto eng = root["engine"]) {
        if (!eng.IsMap()) throw Located(origin, eng, "'engine' must be a mapping");
        for (const auto& kv : eng) {
            const auto key = kv.first.as<std::string>();
            const auto& v = kv.second;
            if (key == "r") cfg.ratio = scalar<double>(origin, v, key);
            else if (key == "K") cfg.neighbors = count(origin, v, key);
            else if (key == "l") cfg.window = count(origin, v, key);
            else if (key == "T") cfg.warmup_length = count(origin, v, key);
            else if (key == "epsilon") cfg.epsilon = scalar<double>(origin, v, key);
            else if (key == "history_capacity") cfg.history_capacity = count(origin, v, key);
            else if (key == "seed") cfg.seed = scalar<std::uint64_t>(origin, v, key);
            else if (key == "max_warmup_iterations") cfg.max_warmup_iterations = count(origin, v, key);
            else if (key == "refit_warmup_soft_sensors")
                cfg.refit_warmup_soft_sensors = scalar<bool>(origin, v, key);
            else throw Located(origin, kv.first, "unknown engine key '" + key + "'");
        }
    }

    cfg.soft_sensors = per_process<std::size_t>(
        origin, root["soft_sensors"], "soft_sensors", topology, cfg.soft_sensors,
        [&](const YAML::Node& n, const std::string& k) { return count(origin, n, k); });
    cfg.gamma = per_process<double>(
        origin, root["gamma"], "gamma", topology, cfg.gamma,
        [&](const YAML::Node& n, const std::string& k) { return scalar<double>(origin, n, k); });

    try {
        cfg.validate(topology);
    } catch (const ConfigError& e) {
        const auto eng = root["engine"];
        if (eng) throw Located(origin, eng, e.what());
        throw ConfigError(origin + ": " + e.what());
    }
    return {std::move(topology), std::move(cfg)};
}

EngineSetup load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string dump_config(const EngineSetup& setup) {
    const auto& topo = setup.topology;
    const auto& c = setup.config;
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "processes" << YAML::Value << YAML::BeginMap;
    for (std::size_t p = 0; p < topo.process_count(); ++p) {
        out << YAML::Key << topo.process_name(p) << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto s : topo.sensors_of(p)) out << topo.sensor_name(s);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    out << YAML::Key << "engine" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "r" << YAML::Value << format_double(c.ratio);
    out << YAML::Key << "K" << YAML::Value << c.neighbors;
    out << YAML::Key << "l" << YAML::Value << c.window;
    out << YAML::Key << "T" << YAML::Value << c.warmup_length;
    out << YAML::Key << "epsilon" << YAML::Value << format_double(c.epsilon);
    out << YAML::Key << "history_capacity" << YAML::Value << c.history_capacity;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "max_warmup_iterations" << YAML::Value << c.max_warmup_iterations;
    out << YAML::Key << "refit_warmup_soft_sensors" << YAML::Value << c.refit_warmup_soft_sensors;
    out << YAML::EndMap;
    out << YAML::Key << "soft_sensors" << YAML::Value << YAML::BeginMap;
    for (std::size_t p = 0; p < topo.process_count(); ++p)
        out << YAML::Key << topo.process_name(p) << YAML::Value << c.soft_sensors[p];
    out << YAML::EndMap;
    out << YAML::Key << "gamma" << YAML::Value << YAML::BeginMap;
    for (std::size_t p = 0; p < topo.process_count(); ++p)
        out << YAML::Key << topo.process_name(p) << YAML::Value << format_double(c.gamma[p]);
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace relsen
