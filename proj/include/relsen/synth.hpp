#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relsen/model.hpp"

namespace relsen {

/// (process name, sensor count) pairs.
using DeploymentSchema = std::vector<std::pair<std::string, std::size_t>>;

/// Six air-quality processes monitored by 5, 3, 3, 2, 2 and 1 sensors.
DeploymentSchema air_quality_schema();

struct SynthOptions {
    DeploymentSchema schema = air_quality_schema();
    std::size_t length = 1968;  // one warm-up week of hourly data plus 1800 steps
    std::size_t drivers = 3;
    std::uint64_t seed = 1;
};

struct SynthData {
    Topology topology;
    std::vector<MeasurementFrame> frames;   // raw sensor readings, t = 1..N
    std::vector<EstimateFrame> latent;      // noiseless process signals
    std::vector<double> sensor_noise;       // per-sensor noise standard deviation
};

/// Cross-correlated processes from shared latent drivers (low-frequency
/// sinusoids plus a slow random walk) and a small process-specific
/// component; each sensor adds i.i.d. Gaussian noise with its own sigma.
/// Values are strictly positive. Deterministic in `seed`.
SynthData synthesize(const SynthOptions& options);

}  // namespace relsen
