#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "relsen/model.hpp"
#include "relsen/soft_sensor.hpp"

namespace relsen {

/// Everything one time step contributes to a score update.
struct WindowRecord {
    Timestamp t = 0;
    std::vector<double> x;  // normalized measurements
    std::vector<double> z;  // finalized states
    std::vector<SoftSensor> softs;
};

/// Share of soft sensor `ss`'s error attributed to sensor `s`:
/// 1(s explanatory) |w_s| / sum |w| * (1 - e).
double g_coefficient(const SoftSensor& ss, std::size_t s);

/// Per-sensor attributed squared error of one record:
///   (z_p - x_s)^2 + sum over foreign soft sensors of g * (z_p' - y)^2.
std::vector<double> attributed_errors(const Topology& topology, const WindowRecord& record);

/// Attributed errors of a single step given as separate pieces.
std::vector<double> attributed_errors(const Topology& topology, std::span<const double> x,
                                      std::span<const double> z,
                                      std::span<const SoftSensor> softs);

/// Lower bound applied to each numerator, relative to the raw total.
inline constexpr double kNumeratorFloor = 1e-12;

/// Totals at or below this are rounding noise on normalized data and count
/// as zero error.
inline constexpr double kNegligibleError = 1e-24;

/// c_s = -ln(numer_s / lambda), lambda = sum of (floored) numerators, so that
/// sum_s exp(-c_s) = 1. Negligible totals give uniform scores ln |S|.
std::vector<double> scores_from_errors(std::span<const double> numerators);

/// Closed-form score update over all records in `window`.
std::vector<double> update_scores(const Topology& topology, std::span<const WindowRecord> window);

/// Sliding window of the last l+1 records plus current scores.
class ReliabilityState {
public:
    ReliabilityState(std::size_t window_length, std::vector<double> initial_scores);

    /// Appends a record, evicting the oldest beyond l+1. Records must arrive
    /// in increasing timestamp order.
    void push(const Topology& topology, WindowRecord record);

    /// Recomputes scores from the records currently held (a partial window
    /// uses whatever is available) and returns them.
    const std::vector<double>& update();

    const std::vector<double>& scores() const { return scores_; }
    std::size_t window_length() const { return window_length_; }
    std::size_t size() const { return records_.size(); }
    const std::deque<WindowRecord>& records() const { return records_; }

private:
    std::size_t window_length_;  // l
    std::vector<double> scores_;
    std::deque<WindowRecord> records_;
    std::deque<std::vector<double>> contributions_;
};

}  // namespace relsen
