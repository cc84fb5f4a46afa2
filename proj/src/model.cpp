#include "relsen/model.hpp"

#include <cmath>
#include <limits>

#include "relsen/errors.hpp"

namespace relsen {

Topology::Topology(std::vector<std::string> processes,
                   std::vector<std::string> sensors,
                   const std::vector<std::pair<std::string, std::string>>& assignment)
    : processes_(std::move(processes)), sensors_(std::move(sensors)) {
    if (processes_.empty()) throw ConfigError("topology has no processes");
    if (sensors_.empty()) throw ConfigError("topology has no sensors");

    for (std::size_t p = 0; p < processes_.size(); ++p) {
        if (!process_index_.emplace(processes_[p], p).second)
            throw ConfigError("duplicate process '" + processes_[p] + "'");
    }
    for (std::size_t s = 0; s < sensors_.size(); ++s) {
        if (!sensor_index_.emplace(sensors_[s], s).second)
            throw ConfigError("duplicate sensor '" + sensors_[s] + "'");
    }

    constexpr auto unassigned = std::numeric_limits<std::size_t>::max();
    owner_.assign(sensors_.size(), unassigned);
    for (const auto& [sensor, process] : assignment) {
        auto si = sensor_index_.find(sensor);
        if (si == sensor_index_.end())
            throw ConfigError("assignment names unknown sensor '" + sensor + "'");
        auto pi = process_index_.find(process);
        if (pi == process_index_.end())
            throw ConfigError("sensor '" + sensor + "' assigned to unknown process '" +
                              process + "'");
        if (owner_[si->second] != unassigned)
            throw ConfigError("sensor '" + sensor + "' is assigned to more than one process");
        owner_[si->second] = pi->second;
    }

    members_.assign(processes_.size(), {});
    for (std::size_t s = 0; s < sensors_.size(); ++s) {
        if (owner_[s] == unassigned)
            throw ConfigError("sensor '" + sensors_[s] + "' is not assigned to any process");
        members_[owner_[s]].push_back(s);
    }
    for (std::size_t p = 0; p < processes_.size(); ++p) {
        if (members_[p].empty())
            throw ConfigError("process '" + processes_[p] + "' has no sensors");
    }
}

Topology Topology::from_groups(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& groups) {
    std::vector<std::string> processes;
    std::vector<std::string> sensors;
    std::vector<std::pair<std::string, std::string>> assignment;
    for (const auto& [process, members] : groups) {
        processes.push_back(process);
        for (const auto& s : members) {
            sensors.push_back(s);
            assignment.emplace_back(s, process);
        }
    }
    return Topology(std::move(processes), std::move(sensors), assignment);
}

std::optional<std::size_t> Topology::find_sensor(const std::string& name) const {
    auto it = sensor_index_.find(name);
    if (it == sensor_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Topology::find_process(const std::string& name) const {
    auto it = process_index_.find(name);
    if (it == process_index_.end()) return std::nullopt;
    return it->second;
}

void validate_frame(const MeasurementFrame& frame, const Topology& topology) {
    if (frame.values.size() != topology.sensor_count()) {
        throw DataError("frame t=" + std::to_string(frame.t) + " has " +
                        std::to_string(frame.values.size()) + " values, expected " +
                        std::to_string(topology.sensor_count()));
    }
    for (std::size_t s = 0; s < frame.values.size(); ++s) {
        if (!std::isfinite(frame.values[s])) {
            throw DataError("frame t=" + std::to_string(frame.t) + ": non-finite value for sensor '" +
                            topology.sensor_name(s) + "'");
        }
    }
}

void validate_consecutive(std::span<const MeasurementFrame> frames) {
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].t != frames[i - 1].t + 1) {
            throw DataError("timestamp gap: t=" + std::to_string(frames[i - 1].t) +
                            " followed by t=" + std::to_string(frames[i].t));
        }
    }
}

Normalizer Normalizer::fit(std::span<const MeasurementFrame> frames) {
    if (frames.empty()) throw DataError("cannot calibrate normalizer on an empty sequence");
    const std::size_t width = frames.front().values.size();
    std::vector<SensorRange> ranges(width);
    for (std::size_t s = 0; s < width; ++s) {
        ranges[s].min = ranges[s].max = frames.front().values[s];
    }
    for (const auto& f : frames) {
        if (f.values.size() != width)
            throw DataError("calibration frame t=" + std::to_string(f.t) + " has inconsistent width");
        for (std::size_t s = 0; s < width; ++s) {
            const double v = f.values[s];
            if (!std::isfinite(v))
                throw DataError("calibration frame t=" + std::to_string(f.t) + " has a non-finite value");
            ranges[s].min = std::min(ranges[s].min, v);
            ranges[s].max = std::max(ranges[s].max, v);
        }
    }
    return Normalizer(std::move(ranges));
}

std::vector<std::size_t> Normalizer::degenerate_sensors() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < ranges_.size(); ++s) {
        if (ranges_[s].degenerate()) out.push_back(s);
    }
    return out;
}

double Normalizer::normalize_value(std::size_t sensor, double v) const {
    const auto& r = ranges_[sensor];
    if (r.degenerate()) return 0.5;
    return (v - r.min) / (r.max - r.min);
}

double Normalizer::denormalize_value(std::size_t sensor, double v) const {
    const auto& r = ranges_[sensor];
    if (r.degenerate()) return r.min;
    return r.min + v * (r.max - r.min);
}

void Normalizer::check(const MeasurementFrame& frame) const {
    if (!fitted()) throw DataError("normalizer used before fitting");
    if (frame.values.size() != ranges_.size()) {
        throw DataError("frame t=" + std::to_string(frame.t) + " width " +
                        std::to_string(frame.values.size()) + " does not match normalizer width " +
                        std::to_string(ranges_.size()));
    }
}

MeasurementFrame Normalizer::normalize(const MeasurementFrame& frame) const {
    check(frame);
    MeasurementFrame out{frame.t, std::vector<double>(frame.values.size())};
    for (std::size_t s = 0; s < frame.values.size(); ++s) {
        out.values[s] = normalize_value(s, frame.values[s]);
    }
    return out;
}

MeasurementFrame Normalizer::denormalize(const MeasurementFrame& frame) const {
    check(frame);
    MeasurementFrame out{frame.t, std::vector<double>(frame.values.size())};
    for (std::size_t s = 0; s < frame.values.size(); ++s) {
        out.values[s] = denormalize_value(s, frame.values[s]);
    }
    return out;
}

}  // namespace relsen
