#include "relsen/warmup.hpp"

#include <cmath>

#include "relsen/errors.hpp"
#include "relsen/random.hpp"
#include "relsen/reliability.hpp"
#include "relsen/tridiagonal.hpp"

namespace relsen {

StateSeries init_states(std::span<const MeasurementFrame> frames, const Topology& topology) {
    StateSeries z(frames.size(), std::vector<double>(topology.process_count(), 0.0));
    for (std::size_t t = 0; t < frames.size(); ++t) {
        for (std::size_t p = 0; p < topology.process_count(); ++p) {
            const auto& members = topology.sensors_of(p);
            double sum = 0.0;
            for (auto s : members) sum += frames[t].values[s];
            z[t][p] = sum / static_cast<double>(members.size());
        }
    }
    return z;
}

SoftSeries build_warmup_soft_sensors(const Topology& topology, const Config& config,
                                     std::span<const MeasurementFrame> frames,
                                     const StateSeries& targets, ErrorNormalizer& errors) {
    std::vector<HistoryEntry> pool;
    pool.reserve(frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        pool.push_back({frames[t].t, frames[t].values, targets[t]});
    }

    SoftSeries softs(frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto ts = frames[t].t;
        for (std::size_t p = 0; p < topology.process_count(); ++p) {
            for (std::size_t m = 1; m <= config.soft_sensors[p]; ++m) {
                auto rng = substream(config.seed, {static_cast<std::uint64_t>(ts), p, m});
                auto ss = construct_soft_sensor(topology, p, m, config.ratio, config.neighbors, pool,
                                                frames[t].values, rng, ts);
                if (ss) softs[t].push_back(std::move(*ss));
            }
        }
    }
    for (const auto& step : softs)
        for (const auto& ss : step) errors.observe(ss.fit_error);
    for (auto& step : softs)
        for (auto& ss : step) ss.norm_error = errors.normalize(ss.fit_error);
    return softs;
}

WarmupProblem make_warmup_problem(Topology topology, Config config,
                                  std::vector<MeasurementFrame> frames) {
    config.validate(topology);
    if (frames.size() != config.warmup_length) {
        throw ConfigError("warm-up needs exactly T=" + std::to_string(config.warmup_length) +
                          " frames, got " + std::to_string(frames.size()));
    }
    validate_consecutive(frames);
    for (const auto& f : frames) validate_frame(f, topology);

    WarmupProblem problem{std::move(topology), std::move(config), std::move(frames), {}, {}};
    const auto targets = init_states(problem.frames, problem.topology);
    problem.softs = build_warmup_soft_sensors(problem.topology, problem.config, problem.frames,
                                              targets, problem.errors);
    return problem;
}

StateSeries solve_states(const Topology& topology, std::span<const double> scores,
                         const SoftSeries& softs, std::span<const MeasurementFrame> frames,
                         std::span<const double> gamma) {
    const auto T = frames.size();
    const auto np = topology.process_count();
    // Summed weights and weighted signals per (t, p).
    std::vector<std::vector<double>> weight(T, std::vector<double>(np, 0.0));
    std::vector<std::vector<double>> signal(T, std::vector<double>(np, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t s = 0; s < topology.sensor_count(); ++s) {
            const auto p = topology.process_of(s);
            weight[t][p] += scores[s];
            signal[t][p] += scores[s] * frames[t].values[s];
        }
        for (const auto& ss : softs[t]) {
            const double c = soft_reliability(ss, scores);
            weight[t][ss.process] += c;
            signal[t][ss.process] += c * ss.output;
        }
    }

    StateSeries z(T, std::vector<double>(np, 0.0));
    std::vector<double> lower(T), diag(T), upper(T), rhs(T);
    for (std::size_t p = 0; p < np; ++p) {
        const double g = gamma[p];
        for (std::size_t t = 0; t < T; ++t) {
            const bool has_prev = t > 0;
            const bool has_next = t + 1 < T;
            diag[t] = weight[t][p] + (has_prev ? g : 0.0) + (has_next ? g : 0.0);
            lower[t] = has_prev ? -g : 0.0;
            upper[t] = has_next ? -g : 0.0;
            rhs[t] = signal[t][p];
        }
        std::vector<double> col;
        try {
            col = solve_tridiagonal(lower, diag, upper, rhs);
        } catch (const SingularSystem&) {
            throw SingularSystem("warm-up state system for process '" + topology.process_name(p) +
                                 "' is singular");
        }
        for (std::size_t t = 0; t < T; ++t) z[t][p] = col[t];
    }
    return z;
}

std::vector<double> update_scores_warmup(const Topology& topology, const StateSeries& states,
                                         const SoftSeries& softs,
                                         std::span<const MeasurementFrame> frames) {
    std::vector<double> numer(topology.sensor_count(), 0.0);
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto e = attributed_errors(topology, frames[t].values, states[t], softs[t]);
        for (std::size_t s = 0; s < numer.size(); ++s) numer[s] += e[s];
    }
    return scores_from_errors(numer);
}

double joint_objective(const Topology& topology, std::span<const double> scores,
                       const StateSeries& states, const SoftSeries& softs,
                       std::span<const MeasurementFrame> frames, std::span<const double> gamma) {
    double loss = 0.0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        for (std::size_t s = 0; s < topology.sensor_count(); ++s) {
            const double d = states[t][topology.process_of(s)] - frames[t].values[s];
            loss += scores[s] * d * d;
        }
        for (const auto& ss : softs[t]) {
            const double d = states[t][ss.process] - ss.output;
            loss += soft_reliability(ss, scores) * d * d;
        }
        if (t > 0) {
            for (std::size_t p = 0; p < topology.process_count(); ++p) {
                const double d = states[t][p] - states[t - 1][p];
                loss += gamma[p] * d * d;
            }
        }
    }
    return loss;
}

double mean_state_distance(const StateSeries& a, const StateSeries& b) {
    if (a.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        double sq = 0.0;
        for (std::size_t p = 0; p < a[t].size(); ++p) {
            const double d = a[t][p] - b[t][p];
            sq += d * d;
        }
        total += std::sqrt(sq);
    }
    return total / static_cast<double>(a.size());
}

WarmupResult run_warmup(const WarmupProblem& problem) {
    const auto& topo = problem.topology;
    const auto& cfg = problem.config;
    const auto& frames = problem.frames;

    WarmupResult result;
    result.softs = problem.softs;
    result.errors = problem.errors;
    result.states = init_states(frames, topo);
    result.status = WarmupStatus::IterationCap;

    for (std::size_t iter = 1; iter <= cfg.max_warmup_iterations; ++iter) {
        if (cfg.refit_warmup_soft_sensors && iter > 1) {
            result.errors = ErrorNormalizer{};
            result.softs = build_warmup_soft_sensors(topo, cfg, frames, result.states, result.errors);
        }
        result.scores = update_scores_warmup(topo, result.states, result.softs, frames);
        auto next = solve_states(topo, result.scores, result.softs, frames, cfg.gamma);
        const double moved = mean_state_distance(next, result.states);
        result.states = std::move(next);
        result.iterations = iter;
        result.objective_trace.push_back(
            joint_objective(topo, result.scores, result.states, result.softs, frames, cfg.gamma));
        if (moved < cfg.epsilon) {
            result.status = WarmupStatus::Converged;
            break;
        }
    }

    for (auto& step : result.softs)
        for (auto& ss : step) ss.reliability = soft_reliability(ss, result.scores);
    return result;
}

}  // namespace relsen
