#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "relsen/model.hpp"

namespace relsen {

/// Per-process median of its sensors (mean of the middle pair for even counts).
EstimateFrame median_clean(const MeasurementFrame& x, const Topology& topology);

/// Per-process mean of its sensors.
EstimateFrame mean_clean(const MeasurementFrame& x, const Topology& topology);

inline constexpr double kImcTolerance = 0.05;

/// Influence mean cleaning: states are score-weighted means, and each score
/// is the fraction of the last l measurements that fell within `tol` of the
/// estimate.
class ImcCleaner {
public:
    ImcCleaner(Topology topology, std::size_t window, double tol = kImcTolerance);

    /// Estimate with the current scores, then record consistency bits
    /// against that estimate and refresh the scores.
    std::pair<EstimateFrame, std::vector<double>> step(const MeasurementFrame& x);

    const std::vector<double>& scores() const { return scores_; }
    double tolerance() const { return tol_; }

private:
    Topology topology_;
    std::size_t window_;
    double tol_;
    std::vector<std::deque<std::uint8_t>> bits_;
    std::vector<double> scores_;
};

}  // namespace relsen
