#include "relsen/pipeline.hpp"

#include "relsen/cleaning.hpp"
#include "relsen/errors.hpp"
#include "relsen/random.hpp"

namespace relsen {

Engine Engine::bootstrap(Topology topology, Config config,
                         std::span<const MeasurementFrame> raw_warmup) {
    config.validate(topology);
    if (raw_warmup.size() != config.warmup_length) {
        throw ConfigError("bootstrap needs exactly T=" + std::to_string(config.warmup_length) +
                          " frames, got " + std::to_string(raw_warmup.size()));
    }
    for (const auto& f : raw_warmup) validate_frame(f, topology);
    validate_consecutive(raw_warmup);

    auto normalizer = Normalizer::fit(raw_warmup);
    std::vector<MeasurementFrame> frames;
    frames.reserve(raw_warmup.size());
    for (const auto& f : raw_warmup) frames.push_back(normalizer.normalize(f));

    auto problem = make_warmup_problem(topology, config, frames);
    auto result = run_warmup(problem);
    return Engine(std::move(topology), std::move(config), std::move(normalizer), std::move(result),
                  frames);
}

Engine::Engine(Topology topology, Config config, Normalizer normalizer, WarmupResult warmup,
               std::span<const MeasurementFrame> frames)
    : topology_(std::move(topology)),
      config_(std::move(config)),
      normalizer_(std::move(normalizer)),
      warmup_(std::move(warmup)),
      history_(config_.history_capacity, config_.seed),
      errors_(warmup_.errors),
      reliability_(config_.window, warmup_.scores) {
    const auto T = frames.size();
    for (std::size_t t = 0; t < T; ++t) {
        warmup_times_.push_back(frames[t].t);
        history_.observe({frames[t].t, frames[t].values, warmup_.states[t]});
    }
    const std::size_t keep = std::min(config_.window + 1, T);
    for (std::size_t t = T - keep; t < T; ++t) {
        reliability_.push(topology_,
                          {frames[t].t, frames[t].values, warmup_.states[t], warmup_.softs[t]});
    }
    last_ = {frames[T - 1].t, warmup_.states[T - 1]};
}

std::vector<EstimateFrame> Engine::warmup_estimates() const {
    std::vector<EstimateFrame> out;
    out.reserve(warmup_times_.size());
    for (std::size_t t = 0; t < warmup_times_.size(); ++t)
        out.push_back({warmup_times_[t], warmup_.states[t]});
    return out;
}

StepResult Engine::step(const MeasurementFrame& raw) {
    if (raw.t != last_.t + 1) {
        throw DataError("timestamp gap: expected t=" + std::to_string(last_.t + 1) + ", got t=" +
                        std::to_string(raw.t));
    }
    validate_frame(raw, topology_);
    const auto x = normalizer_.normalize(raw);
    const auto& prev_scores = reliability_.scores();

    StepResult out;
    std::vector<SoftSensor> softs;
    for (std::size_t p = 0; p < topology_.process_count(); ++p) {
        for (std::size_t m = 1; m <= config_.soft_sensors[p]; ++m) {
            auto rng = substream(config_.seed, {static_cast<std::uint64_t>(x.t), p, m});
            auto ss = construct_soft_sensor(topology_, p, m, config_.ratio, config_.neighbors,
                                            history_.entries(), x.values, rng);
            if (ss) {
                softs.push_back(std::move(*ss));
            } else {
                ++out.soft_sensors_skipped;
            }
        }
    }
    out.soft_sensors_built = softs.size();

    for (const auto& ss : softs) errors_.observe(ss.fit_error);
    for (auto& ss : softs) {
        ss.norm_error = errors_.normalize(ss.fit_error);
        ss.reliability = soft_reliability(ss, prev_scores);
    }

    out.estimate = estimate_states(topology_, x, softs, prev_scores, last_, config_.gamma);

    out.soft_sensors = softs;
    reliability_.push(topology_, {x.t, x.values, out.estimate.states, std::move(softs)});
    out.scores = reliability_.update();

    history_.observe({x.t, x.values, out.estimate.states});
    last_ = out.estimate;
    return out;
}

}  // namespace relsen
