#include "relsen/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "relsen/errors.hpp"

namespace relsen {

EstimateFrame median_clean(const MeasurementFrame& x, const Topology& topology) {
    EstimateFrame out{x.t, std::vector<double>(topology.process_count())};
    std::vector<double> vals;
    for (std::size_t p = 0; p < topology.process_count(); ++p) {
        vals.clear();
        for (auto s : topology.sensors_of(p)) vals.push_back(x.values[s]);
        std::sort(vals.begin(), vals.end());
        const auto n = vals.size();
        out.states[p] = n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    }
    return out;
}

EstimateFrame mean_clean(const MeasurementFrame& x, const Topology& topology) {
    EstimateFrame out{x.t, std::vector<double>(topology.process_count())};
    for (std::size_t p = 0; p < topology.process_count(); ++p) {
        const auto& members = topology.sensors_of(p);
        double sum = 0.0;
        for (auto s : members) sum += x.values[s];
        out.states[p] = sum / static_cast<double>(members.size());
    }
    return out;
}

ImcCleaner::ImcCleaner(Topology topology, std::size_t window, double tol)
    : topology_(std::move(topology)),
      window_(window),
      tol_(tol),
      bits_(topology_.sensor_count(), std::deque<std::uint8_t>(window, 1)),
      scores_(topology_.sensor_count(), 1.0) {
    if (window_ == 0) throw ConfigError("IMC window must be positive");
    if (!(tol_ > 0.0)) throw ConfigError("IMC tolerance must be positive");
}

std::pair<EstimateFrame, std::vector<double>> ImcCleaner::step(const MeasurementFrame& x) {
    EstimateFrame z{x.t, std::vector<double>(topology_.process_count())};
    for (std::size_t p = 0; p < topology_.process_count(); ++p) {
        const auto& members = topology_.sensors_of(p);
        if (members.size() == 1) {
            z.states[p] = x.values[members.front()];
            continue;
        }
        double num = 0.0;
        double den = 0.0;
        for (auto s : members) {
            num += scores_[s] * x.values[s];
            den += scores_[s];
        }
        if (den > 0.0) {
            z.states[p] = num / den;
        } else {
            double sum = 0.0;
            for (auto s : members) sum += x.values[s];
            z.states[p] = sum / static_cast<double>(members.size());
        }
    }

    for (std::size_t s = 0; s < topology_.sensor_count(); ++s) {
        const bool consistent = std::abs(x.values[s] - z.states[topology_.process_of(s)]) <= tol_;
        auto& w = bits_[s];
        w.push_back(consistent ? 1 : 0);
        if (w.size() > window_) w.pop_front();
        double ones = 0.0;
        for (auto b : w) ones += b;
        scores_[s] = ones / static_cast<double>(window_);
    }
    return {std::move(z), scores_};
}

}  // namespace relsen
