#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "relsen/config.hpp"
#include "relsen/model.hpp"
#include "relsen/reliability.hpp"
#include "relsen/soft_sensor.hpp"
#include "relsen/warmup.hpp"

namespace relsen {

/// Output of one engine step, stamped with the frame's timestamp.
struct StepResult {
    EstimateFrame estimate;
    std::vector<double> scores;
    std::vector<SoftSensor> soft_sensors;
    std::size_t soft_sensors_built = 0;
    std::size_t soft_sensors_skipped = 0;
};

/// The online cleaning loop. One engine per stream; not thread-safe, but
/// may be moved between threads between steps.
class Engine {
public:
    /// Fits the normalizer on the first T raw frames, solves the warm-up,
    /// seeds the history with the warm-up (x, z) pairs and the reliability
    /// window with the last min(l+1, T) warm-up records.
    static Engine bootstrap(Topology topology, Config config,
                            std::span<const MeasurementFrame> raw_warmup);

    /// Processes the next raw frame. Its timestamp must follow the previous
    /// one by exactly one.
    StepResult step(const MeasurementFrame& raw);

    const Topology& topology() const { return topology_; }
    const Config& config() const { return config_; }
    const Normalizer& normalizer() const { return normalizer_; }
    const WarmupResult& warmup() const { return warmup_; }
    const std::vector<double>& scores() const { return reliability_.scores(); }
    const EstimateFrame& last_estimate() const { return last_; }
    const HistoryStore& history() const { return history_; }
    const ErrorNormalizer& error_normalizer() const { return errors_; }

    /// Warm-up states as frames, in normalized units.
    std::vector<EstimateFrame> warmup_estimates() const;

private:
    Engine(Topology topology, Config config, Normalizer normalizer, WarmupResult warmup,
           std::span<const MeasurementFrame> frames);

    Topology topology_;
    Config config_;
    Normalizer normalizer_;
    WarmupResult warmup_;
    std::vector<Timestamp> warmup_times_;
    HistoryStore history_;
    ErrorNormalizer errors_;
    ReliabilityState reliability_;
    EstimateFrame last_;
};

}  // namespace relsen
