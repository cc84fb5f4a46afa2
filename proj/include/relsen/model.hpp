#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace relsen {

using Timestamp = std::int64_t;

/// Sensor-to-process mapping. Sensors and processes are addressed by dense
/// indices in declaration order; names are kept for I/O.
class Topology {
public:
    Topology() = default;

    /// Builds a topology from explicit (sensor, process) assignment pairs.
    /// Throws ConfigError if a sensor is assigned to zero or to several
    /// processes, if a name is unknown or duplicated, or if a process is
    /// left without sensors.
    Topology(std::vector<std::string> processes,
             std::vector<std::string> sensors,
             const std::vector<std::pair<std::string, std::string>>& assignment);

    /// Convenience form: one (process, sensors) group per process. Sensor
    /// order is the concatenation of the groups.
    static Topology from_groups(
        const std::vector<std::pair<std::string, std::vector<std::string>>>& groups);

    std::size_t process_count() const { return processes_.size(); }
    std::size_t sensor_count() const { return sensors_.size(); }

    const std::vector<std::size_t>& sensors_of(std::size_t process) const {
        return members_[process];
    }
    std::size_t process_of(std::size_t sensor) const { return owner_[sensor]; }

    const std::string& process_name(std::size_t p) const { return processes_[p]; }
    const std::string& sensor_name(std::size_t s) const { return sensors_[s]; }
    const std::vector<std::string>& process_names() const { return processes_; }
    const std::vector<std::string>& sensor_names() const { return sensors_; }

    std::optional<std::size_t> find_sensor(const std::string& name) const;
    std::optional<std::size_t> find_process(const std::string& name) const;

    /// Number of sensors not monitoring `process`, i.e. |S \ S_p|.
    std::size_t foreign_sensor_count(std::size_t process) const {
        return sensors_.size() - members_[process].size();
    }

    bool operator==(const Topology& other) const {
        return processes_ == other.processes_ && sensors_ == other.sensors_ &&
               owner_ == other.owner_;
    }

private:
    std::vector<std::string> processes_;
    std::vector<std::string> sensors_;
    std::vector<std::size_t> owner_;
    std::vector<std::vector<std::size_t>> members_;
    std::unordered_map<std::string, std::size_t> sensor_index_;
    std::unordered_map<std::string, std::size_t> process_index_;
};

/// Raw or normalized measurements x^t, one value per sensor.
struct MeasurementFrame {
    Timestamp t = 0;
    std::vector<double> values;
};

/// Estimated process states z^t, one value per process.
struct EstimateFrame {
    Timestamp t = 0;
    std::vector<double> states;
};

/// Throws DataError unless the frame has one finite value per sensor.
void validate_frame(const MeasurementFrame& frame, const Topology& topology);

/// Throws DataError unless timestamps increase by exactly one.
void validate_consecutive(std::span<const MeasurementFrame> frames);

struct SensorRange {
    double min = 0.0;
    double max = 0.0;
    bool degenerate() const { return !(max > min); }
};

/// Per-sensor min-max scaling to [0, 1], fitted once on a calibration window.
class Normalizer {
public:
    Normalizer() = default;
    explicit Normalizer(std::vector<SensorRange> ranges) : ranges_(std::move(ranges)) {}

    /// Extrema per sensor over `frames`. Throws DataError on an empty
    /// sequence or inconsistent frame widths.
    static Normalizer fit(std::span<const MeasurementFrame> frames);

    bool fitted() const { return !ranges_.empty(); }
    const std::vector<SensorRange>& ranges() const { return ranges_; }
    std::vector<std::size_t> degenerate_sensors() const;

    double normalize_value(std::size_t sensor, double v) const;
    double denormalize_value(std::size_t sensor, double v) const;

    /// Values are not clamped: post-calibration data may leave [0, 1].
    MeasurementFrame normalize(const MeasurementFrame& frame) const;
    MeasurementFrame denormalize(const MeasurementFrame& frame) const;

private:
    void check(const MeasurementFrame& frame) const;

    std::vector<SensorRange> ranges_;
};

}  // namespace relsen
