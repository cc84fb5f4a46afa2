#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relsen/config.hpp"
#include "relsen/model.hpp"
#include "relsen/soft_sensor.hpp"

namespace relsen {

/// State estimates over the warm-up span, indexed [t][p].
using StateSeries = std::vector<std::vector<double>>;

/// Soft sensors per warm-up step, indexed [t].
using SoftSeries = std::vector<std::vector<SoftSensor>>;

/// Joint estimation problem over the first T normalized frames.
struct WarmupProblem {
    Topology topology;
    Config config;
    std::vector<MeasurementFrame> frames;
    SoftSeries softs;
    ErrorNormalizer errors;  // every warm-up fitting error
};

/// Per-process mean of its sensors at every step.
StateSeries init_states(std::span<const MeasurementFrame> frames, const Topology& topology);

/// Builds the warm-up soft sensors against `targets`. Neighbors come from the
/// whole warm-up span minus the query step. Every fitting error is added to
/// `errors` before normalized errors are assigned.
SoftSeries build_warmup_soft_sensors(const Topology& topology, const Config& config,
                                     std::span<const MeasurementFrame> frames,
                                     const StateSeries& targets, ErrorNormalizer& errors);

/// Frames must already be normalized; soft sensors are fitted on init_states.
WarmupProblem make_warmup_problem(Topology topology, Config config,
                                  std::vector<MeasurementFrame> frames);

/// Exact state update for fixed scores: one symmetric tridiagonal system per
/// process,
///   (C_t + 1(t>1) g + 1(t<T) g) z_t - 1(t>1) g z_{t-1} - 1(t<T) g z_{t+1} = R_t
/// with C_t the summed hard and soft weights and R_t their weighted signals.
StateSeries solve_states(const Topology& topology, std::span<const double> scores,
                         const SoftSeries& softs, std::span<const MeasurementFrame> frames,
                         std::span<const double> gamma);

/// Score update for fixed states, summing attributed errors over all of [1:T].
std::vector<double> update_scores_warmup(const Topology& topology, const StateSeries& states,
                                         const SoftSeries& softs,
                                         std::span<const MeasurementFrame> frames);

/// The joint warm-up loss for given scores and states.
double joint_objective(const Topology& topology, std::span<const double> scores,
                       const StateSeries& states, const SoftSeries& softs,
                       std::span<const MeasurementFrame> frames, std::span<const double> gamma);

/// (1/T) sum_t ||a_t - b_t||.
double mean_state_distance(const StateSeries& a, const StateSeries& b);

enum class WarmupStatus { Converged, IterationCap };

struct WarmupResult {
    std::vector<double> scores;
    StateSeries states;
    std::size_t iterations = 0;
    WarmupStatus status = WarmupStatus::Converged;
    std::vector<double> objective_trace;  // joint loss after each iteration
    SoftSeries softs;                     // with reliability filled from final scores
    ErrorNormalizer errors;

    double final_objective() const {
        return objective_trace.empty() ? 0.0 : objective_trace.back();
    }
};

/// Coordinate descent: alternate update_scores_warmup and solve_states from
/// init_states until the mean state change drops below epsilon or the
/// iteration cap is hit (status IterationCap, last iterate returned).
WarmupResult run_warmup(const WarmupProblem& problem);

}  // namespace relsen
