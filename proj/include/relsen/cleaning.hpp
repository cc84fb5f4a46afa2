#pragma once

#include <span>

#include "relsen/model.hpp"
#include "relsen/soft_sensor.hpp"

namespace relsen {

/// Closed-form minimizer of the reliability-weighted cleaning loss:
///
///   z_p = (sum_s c_s x_s + sum_m c_{p,m} y_{p,m} + gamma_p z_prev_p)
///       / (sum_s c_s     + sum_m c_{p,m}         + gamma_p)
///
/// Soft-sensor weights c_{p,m} are derived from `scores` and each record's
/// weights and normalized error. Soft sensors may be given in any order.
/// Throws EstimationError when a process has zero total weight.
EstimateFrame estimate_states(const Topology& topology, const MeasurementFrame& x,
                              std::span<const SoftSensor> softs, std::span<const double> scores,
                              const EstimateFrame& previous, std::span<const double> gamma);

}  // namespace relsen
