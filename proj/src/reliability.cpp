#include "relsen/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relsen/errors.hpp"

namespace relsen {

double g_coefficient(const SoftSensor& ss, std::size_t s) {
    const auto it = std::find(ss.explanatory.begin(), ss.explanatory.end(), s);
    if (it == ss.explanatory.end()) return 0.0;
    const auto i = static_cast<std::size_t>(it - ss.explanatory.begin());
    return std::abs(ss.weights[i]) / ss.abs_weight_sum() * (1.0 - ss.norm_error);
}

std::vector<double> attributed_errors(const Topology& topology, std::span<const double> x,
                                      std::span<const double> z,
                                      std::span<const SoftSensor> softs) {
    std::vector<double> out(topology.sensor_count(), 0.0);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const double d = z[topology.process_of(s)] - x[s];
        out[s] = d * d;
    }
    for (const auto& ss : softs) {
        const double d = z[ss.process] - ss.output;
        const double err = d * d;
        const double total = ss.abs_weight_sum();
        const double keep = 1.0 - ss.norm_error;
        for (std::size_t i = 0; i < ss.explanatory.size(); ++i) {
            out[ss.explanatory[i]] += std::abs(ss.weights[i]) / total * keep * err;
        }
    }
    return out;
}

std::vector<double> attributed_errors(const Topology& topology, const WindowRecord& record) {
    return attributed_errors(topology, record.x, record.z, record.softs);
}

std::vector<double> scores_from_errors(std::span<const double> numerators) {
    const auto n = numerators.size();
    std::vector<double> scores(n);
    double raw_total = 0.0;
    for (double v : numerators) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("non-finite or negative window error");
        raw_total += v;
    }
    if (!(raw_total > kNegligibleError)) {
        std::fill(scores.begin(), scores.end(), std::log(static_cast<double>(n)));
        return scores;
    }
    const double floor = std::max(kNumeratorFloor * raw_total, 1e-300);
    std::vector<double> floored(n);
    double lambda = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        floored[s] = std::max(numerators[s], floor);
        lambda += floored[s];
    }
    for (std::size_t s = 0; s < n; ++s) {
        // log difference keeps precision when numer_s is close to lambda
        scores[s] = std::max(0.0, std::log(lambda) - std::log(floored[s]));
    }
    return scores;
}

std::vector<double> update_scores(const Topology& topology, std::span<const WindowRecord> window) {
    std::vector<double> numer(topology.sensor_count(), 0.0);
    for (const auto& rec : window) {
        const auto e = attributed_errors(topology, rec);
        for (std::size_t s = 0; s < numer.size(); ++s) numer[s] += e[s];
    }
    return scores_from_errors(numer);
}

ReliabilityState::ReliabilityState(std::size_t window_length, std::vector<double> initial_scores)
    : window_length_(window_length), scores_(std::move(initial_scores)) {}

void ReliabilityState::push(const Topology& topology, WindowRecord record) {
    if (!records_.empty() && record.t <= records_.back().t)
        throw DataError("reliability window records must be time ordered");
    contributions_.push_back(attributed_errors(topology, record));
    records_.push_back(std::move(record));
    while (records_.size() > window_length_ + 1) {
        records_.pop_front();
        contributions_.pop_front();
    }
}

const std::vector<double>& ReliabilityState::update() {
    if (contributions_.empty()) return scores_;
    std::vector<double> numer(contributions_.front().size(), 0.0);
    for (const auto& c : contributions_) {
        for (std::size_t s = 0; s < numer.size(); ++s) numer[s] += c[s];
    }
    scores_ = scores_from_errors(numer);
    return scores_;
}

}  // namespace relsen
