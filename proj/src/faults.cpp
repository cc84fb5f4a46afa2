#include "relsen/faults.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "relsen/errors.hpp"
#include "relsen/random.hpp"

namespace relsen {

const char* to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::Short: return "SHORT";
        case FaultKind::Noise: return "NOISE";
        case FaultKind::Constant: return "CONSTANT";
    }
    return "?";
}

FaultKind parse_fault_kind(const std::string& name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "SHORT") return FaultKind::Short;
    if (up == "NOISE") return FaultKind::Noise;
    if (up == "CONSTANT") return FaultKind::Constant;
    throw ConfigError("unknown fault kind '" + name + "'");
}

void FaultSpec::validate() const {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw ConfigError("fault intensity must be finite and non-negative");
    if (kind == FaultKind::Short && !(short_rate > 0.0 && short_rate <= 1.0))
        throw ConfigError("SHORT fault rate must lie in (0, 1]");
    if (kind != FaultKind::Short && (min_duration == 0 || min_duration > max_duration))
        throw ConfigError("fault duration range must satisfy 0 < min <= max");
}

std::size_t Injection::contaminated() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::vector<Segment> schedule_segments(std::size_t length, std::size_t min_duration,
                                       std::size_t max_duration, std::size_t gap,
                                       std::uint64_t seed) {
    if (length < min_duration) {
        throw DataError("series of length " + std::to_string(length) +
                        " is too short for a fault segment of " + std::to_string(min_duration));
    }
    auto rng = substream(seed, {0x5345474dULL});
    std::uniform_int_distribution<std::size_t> duration(min_duration, max_duration);
    std::vector<Segment> out;
    std::size_t pos = 0;
    while (pos < length) {
        const auto d = duration(rng);
        if (pos + d > length) break;
        out.emplace_back(pos, pos + d);
        pos += d + gap;
    }
    if (out.empty()) {
        // the first draw overshot; place a minimum-length segment instead
        out.emplace_back(0, min_duration);
    }
    return out;
}

double sample_stddev(std::span<const double> series) {
    const auto n = series.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : series) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

Injection inject_short(std::span<const double> series, const FaultSpec& spec) {
    spec.validate();
    Injection out{{series.begin(), series.end()}, std::vector<std::uint8_t>(series.size(), 0)};
    const auto n = series.size();
    const auto picks = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::llround(spec.short_rate * static_cast<double>(n))));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<std::size_t> chosen;
    chosen.reserve(picks);
    auto rng = substream(spec.seed, {0x53484f5254ULL});
    std::sample(idx.begin(), idx.end(), std::back_inserter(chosen), picks, rng);
    for (auto i : chosen) {
        out.series[i] = series[i] + spec.intensity * series[i];
        out.mask[i] = 1;
    }
    return out;
}

namespace {

template <typename Perturb>
Injection inject_segments(std::span<const double> series, const FaultSpec& spec, Perturb perturb) {
    spec.validate();
    Injection out{{series.begin(), series.end()}, std::vector<std::uint8_t>(series.size(), 0)};
    const auto segments =
        schedule_segments(series.size(), spec.min_duration, spec.max_duration, spec.gap, spec.seed);
    for (const auto& [b, e] : segments) {
        for (auto i = b; i < e; ++i) {
            out.series[i] = perturb(series[i]);
            out.mask[i] = 1;
        }
    }
    return out;
}

}  // namespace

Injection inject_noise(std::span<const double> series, const FaultSpec& spec, double sigma) {
    auto rng = substream(spec.seed, {0x4e4f495345ULL});
    const double sd = std::sqrt(spec.intensity) * sigma;
    std::normal_distribution<double> noise(0.0, 1.0);
    return inject_segments(series, spec, [&](double x) {
        const double draw = noise(rng);
        return sd > 0.0 ? x + sd * draw : x;
    });
}

Injection inject_constant(std::span<const double> series, const FaultSpec& spec, double sigma) {
    const double offset = spec.intensity * sigma;
    return inject_segments(series, spec, [&](double x) { return x + offset; });
}

Injection inject(std::span<const double> series, const FaultSpec& spec, double sigma) {
    switch (spec.kind) {
        case FaultKind::Short: return inject_short(series, spec);
        case FaultKind::Noise: return inject_noise(series, spec, sigma);
        case FaultKind::Constant: return inject_constant(series, spec, sigma);
    }
    throw ConfigError("unknown fault kind");
}

Injection staged_campaign(std::span<const double> series, const FaultSpec& spec,
                          std::size_t warmup, std::span<const double> intensities) {
    if (intensities.empty()) throw ConfigError("a staged campaign needs at least one intensity");
    if (warmup >= series.size())
        throw DataError("no data after the warm-up span to inject faults into");
    const double sigma = sample_stddev(series);
    Injection out{{series.begin(), series.end()}, std::vector<std::uint8_t>(series.size(), 0)};

    const auto span = series.size() - warmup;
    const auto stages = intensities.size();
    const auto stage_len = span / stages;
    for (std::size_t k = 0; k < stages; ++k) {
        const auto begin = warmup + k * stage_len;
        const auto end = k + 1 == stages ? series.size() : begin + stage_len;
        FaultSpec stage = spec;
        stage.intensity = intensities[k];
        stage.seed = mix64(spec.seed ^ mix64(k + 1));
        const auto part = inject(series.subspan(begin, end - begin), stage, sigma);
        std::copy(part.series.begin(), part.series.end(), out.series.begin() + static_cast<std::ptrdiff_t>(begin));
        std::copy(part.mask.begin(), part.mask.end(), out.mask.begin() + static_cast<std::ptrdiff_t>(begin));
    }
    return out;
}


namespace {

ConfigError at(const std::string& origin, const YAML::Node& node, const std::string& msg) {
    return ConfigError(origin + ":" + std::to_string(node.Mark().line + 1) + ": " + msg);
}

template <typename T>
T read(const std::string& origin, const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw at(origin, node, "invalid value for '" + key + "'");
    }
}

}  // namespace

FaultCampaign parse_fault_campaign(const std::string& text, std::uint64_t default_seed,
                                   const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(origin + ": top level must be a mapping");

    FaultCampaign campaign;
    if (auto w = root["warmup"]) {
        const auto v = read<long long>(origin, w, "warmup");
        if (v < 0) throw at(origin, w, "'warmup' must be non-negative");
        campaign.warmup = static_cast<std::size_t>(v);
    }
    if (auto st = root["stages"]) {
        if (!st.IsSequence() || st.size() == 0)
            throw at(origin, st, "'stages' must be a non-empty list of intensities");
        for (const auto& v : st) campaign.stages.push_back(read<double>(origin, v, "stages"));
    }
    const auto list = root["faults"];
    if (!list || !list.IsSequence() || list.size() == 0)
        throw ConfigError(origin + ": 'faults' must be a non-empty list");

    std::set<std::string> targets;
    std::uint64_t ordinal = 0;
    for (const auto& item : list) {
        if (!item.IsMap()) throw at(origin, item, "each fault must be a mapping");
        FaultSpec spec;
        const auto sensor = item["sensor"];
        if (!sensor) throw at(origin, item, "fault is missing 'sensor'");
        spec.target = read<std::string>(origin, sensor, "sensor");
        if (!targets.insert(spec.target).second)
            throw at(origin, sensor, "sensor '" + spec.target + "' already has a fault");
        const auto kind = item["kind"];
        if (!kind) throw at(origin, item, "fault is missing 'kind'");
        try {
            spec.kind = parse_fault_kind(read<std::string>(origin, kind, "kind"));
        } catch (const ConfigError& e) {
            throw at(origin, kind, e.what());
        }
        if (auto v = item["intensity"]) spec.intensity = read<double>(origin, v, "intensity");
        if (auto v = item["rate"]) spec.short_rate = read<double>(origin, v, "rate");
        if (auto v = item["duration"]) {
            if (!v.IsSequence() || v.size() != 2) throw at(origin, v, "'duration' must be [min, max]");
            spec.min_duration = read<std::size_t>(origin, v[0], "duration");
            spec.max_duration = read<std::size_t>(origin, v[1], "duration");
        }
        if (auto v = item["gap"]) spec.gap = read<std::size_t>(origin, v, "gap");
        spec.seed = item["seed"] ? read<std::uint64_t>(origin, item["seed"], "seed")
                                 : mix64(default_seed ^ mix64(++ordinal));
        for (const auto& kv : item) {
            static const std::set<std::string> known = {"sensor", "kind", "intensity", "rate",
                                                        "duration", "gap", "seed"};
            const auto key = kv.first.as<std::string>();
            if (!known.count(key)) throw at(origin, kv.first, "unknown fault key '" + key + "'");
        }
        try {
            spec.validate();
        } catch (const ConfigError& e) {
            throw at(origin, item, e.what());
        }
        campaign.faults.push_back(std::move(spec));
    }
    return campaign;
}

FaultCampaign load_fault_campaign(const std::filesystem::path& path, std::uint64_t default_seed) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fault spec " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_fault_campaign(buf.str(), default_seed, path.string());
}

std::vector<std::vector<std::uint8_t>> apply_campaign(const FaultCampaign& campaign,
                                                      const std::vector<std::string>& columns,
                                                      std::vector<std::vector<double>>& series) {
    std::vector<std::vector<std::uint8_t>> masks(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) masks[c].assign(series[c].size(), 0);

    for (const auto& spec : campaign.faults) {
        const auto it = std::find(columns.begin(), columns.end(), spec.target);
        if (it == columns.end())
            throw DataError("fault targets sensor '" + spec.target + "' which the input lacks");
        const auto c = static_cast<std::size_t>(it - columns.begin());
        auto& col = series[c];
        if (campaign.warmup >= col.size())
            throw DataError("no rows after the warm-up prefix of " + std::to_string(campaign.warmup));

        Injection inj;
        if (!campaign.stages.empty()) {
            inj = staged_campaign(col, spec, campaign.warmup, campaign.stages);
        } else {
            const double sigma = sample_stddev(col);
            const auto tail = std::span<const double>(col).subspan(campaign.warmup);
            auto part = inject(tail, spec, sigma);
            inj.series.assign(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(campaign.warmup));
            inj.series.insert(inj.series.end(), part.series.begin(), part.series.end());
            inj.mask.assign(campaign.warmup, 0);
            inj.mask.insert(inj.mask.end(), part.mask.begin(), part.mask.end());
        }
        col = std::move(inj.series);
        masks[c] = std::move(inj.mask);
    }
    return masks;
}

}  // namespace relsen
