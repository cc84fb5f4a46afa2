#include "relsen/cleaning.hpp"

#include <vector>

#include "relsen/errors.hpp"

namespace relsen {

EstimateFrame estimate_states(const Topology& topology, const MeasurementFrame& x,
                              std::span<const SoftSensor> softs, std::span<const double> scores,
                              const EstimateFrame& previous, std::span<const double> gamma) {
    const auto np = topology.process_count();
    std::vector<double> num(np, 0.0);
    std::vector<double> den(np, 0.0);

    for (std::size_t p = 0; p < np; ++p) {
        for (auto s : topology.sensors_of(p)) {
            num[p] += scores[s] * x.values[s];
            den[p] += scores[s];
        }
    }
    for (const auto& ss : softs) {
        const double c = soft_reliability(ss, scores);
        num[ss.process] += c * ss.output;
        den[ss.process] += c;
    }

    EstimateFrame out{x.t, std::vector<double>(np)};
    for (std::size_t p = 0; p < np; ++p) {
        num[p] += gamma[p] * previous.states[p];
        den[p] += gamma[p];
        if (!(den[p] > 0.0)) {
            throw EstimationError("process '" + topology.process_name(p) + "' at t=" +
                                  std::to_string(x.t) + " has no weighted information source");
        }
        out.states[p] = num[p] / den[p];
    }
    return out;
}

}  // namespace relsen
