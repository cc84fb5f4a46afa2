#include "relsen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "relsen/errors.hpp"
#include "relsen/random.hpp"

namespace relsen {

DeploymentSchema air_quality_schema() {
    return {{"NO2", 5}, {"NO", 3}, {"PM10", 3}, {"PM2.5", 2}, {"CO", 2}, {"O3", 1}};
}

namespace {

// Smooth zero-mean, unit-variance signal: daily, weekly and one shorter
// sinusoid plus a mean-reverting AR(1) wander.
std::vector<double> smooth_signal(std::size_t n, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double periods[] = {24.0, 168.0, 8.0 + 40.0 * unit(rng)};
    double amp[3];
    double phase[3];
    for (int k = 0; k < 3; ++k) {
        amp[k] = 0.3 + 0.7 * unit(rng);
        phase[k] = two_pi * unit(rng);
    }
    std::vector<double> out(n);
    double wander = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wander = 0.9 * wander + 0.1 * gauss(rng);
        double v = wander;
        for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(two_pi * static_cast<double>(i) / periods[k] + phase[k]);
        out[i] = v;
    }
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (double& v : out) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    return out;
}

}  // namespace

SynthData synthesize(const SynthOptions& options) {
    if (options.schema.empty()) throw ConfigError("synthetic schema has no processes");
    if (options.length < 2) throw ConfigError("synthetic series needs at least two steps");
    if (options.drivers == 0) throw ConfigError("synthetic generator needs at least one driver");

    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto& [name, count] : options.schema) {
        if (count == 0) throw ConfigError("process '" + name + "' needs at least one sensor");
        std::vector<std::string> sensors;
        for (std::size_t i = 1; i <= count; ++i) sensors.push_back(name + "_" + std::to_string(i));
        groups.emplace_back(name, std::move(sensors));
    }

    SynthData data;
    data.topology = Topology::from_groups(groups);
    const auto& topo = data.topology;
    const auto n = options.length;
    const auto np = topo.process_count();

    auto rng = substream(options.seed, {0x53594e5448ULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> drivers;
    for (std::size_t d = 0; d < options.drivers; ++d) drivers.push_back(smooth_signal(n, rng));

    std::vector<std::vector<double>> process(np, std::vector<double>(n, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        std::vector<double> loading(options.drivers);
        for (auto& l : loading) l = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.3 + 0.7 * unit(rng));
        const auto own = smooth_signal(n, rng);
        const double scale = 5.0 + 45.0 * unit(rng);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.05 * own[i];
            for (std::size_t d = 0; d < options.drivers; ++d) v += loading[d] * drivers[d][i];
            // mild nonlinearity so local fits beat a global plane
            v += 0.05 * v * v;
            process[p][i] = scale * v;
        }
        const auto [lo, hi] = std::minmax_element(process[p].begin(), process[p].end());
        const double shift = -*lo + 0.25 * (*hi - *lo);
        for (auto& v : process[p]) v += shift;
    }

    data.sensor_noise.resize(topo.sensor_count());
    for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
        const auto& series = process[topo.process_of(s)];
        const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
        data.sensor_noise[s] = (*hi - *lo) * (0.005 + 0.02 * unit(rng));
    }

    data.frames.resize(n);
    data.latent.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = static_cast<Timestamp>(i + 1);
        data.latent[i] = {t, std::vector<double>(np)};
        for (std::size_t p = 0; p < np; ++p) data.latent[i].states[p] = process[p][i];
        data.frames[i] = {t, std::vector<double>(topo.sensor_count())};
        for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
            data.frames[i].values[s] = process[topo.process_of(s)][i] + data.sensor_noise[s] * gauss(rng);
        }
    }
    return data;
}

}  // namespace relsen
