#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relsen/model.hpp"
#include "relsen/random.hpp"

namespace relsen {

/// One past time step: full normalized measurement vector and the engine's
/// finalized state estimate for that step.
struct HistoryEntry {
    Timestamp t = 0;
    std::vector<double> x;
    std::vector<double> z;
};

/// Fixed-capacity uniform sample of the stream (reservoir sampling,
/// Algorithm R). Neighbor sets are searched here instead of the full past.
class HistoryStore {
public:
    HistoryStore(std::size_t capacity, std::uint64_t seed);

    void observe(HistoryEntry entry);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    std::uint64_t seen() const { return seen_; }
    std::span<const HistoryEntry> entries() const { return entries_; }

private:
    std::size_t capacity_;
    std::uint64_t seen_ = 0;
    Rng rng_;
    std::vector<HistoryEntry> entries_;
};

/// Running min/max over every fitting error produced so far.
class ErrorNormalizer {
public:
    void observe(double fit_error);
    /// (E - min) / (max - min), clamped to [0, 1]; 0 when the range is empty.
    double normalize(double fit_error) const;

    std::size_t count() const { return count_; }
    double min() const { return min_; }
    double max() const { return max_; }

private:
    std::size_t count_ = 0;
    double min_ = 0.0;
    double max_ = 0.0;
};

/// A soft sensor built for process `process` at one time step.
struct SoftSensor {
    std::size_t process = 0;
    std::size_t index = 0;                 // m, 1-based
    std::vector<std::size_t> explanatory;  // sorted sensor indices, none in S_p
    std::vector<double> weights;           // aligned with `explanatory`
    double bias = 0.0;
    double fit_error = 0.0;   // E, mean squared residual over the neighbor set
    double norm_error = 0.0;  // e in [0, 1]
    double output = 0.0;      // y
    double reliability = 0.0; // c_{p,m} at the time the step was cleaned

    double abs_weight_sum() const;
};

/// ceil(r * |S \ S_p|).
std::size_t explanatory_count(const Topology& topology, std::size_t process, double ratio);

/// Uniformly random subset of the sensors outside `process`, returned sorted.
/// Throws ConfigError if no such sensor exists.
std::vector<std::size_t> select_explanatory(const Topology& topology, std::size_t process,
                                            double ratio, Rng& rng);

/// Positions in `pool` of the K entries closest (Euclidean, on the `dims`
/// coordinates of x) to `point`, nearest first, ties to the older timestamp.
/// Entries stamped `exclude` are skipped. Throws InsufficientHistory if fewer
/// than K entries are eligible.
std::vector<std::size_t> knn(std::span<const HistoryEntry> pool,
                             std::span<const std::size_t> dims,
                             std::span<const double> point, std::size_t k,
                             std::optional<Timestamp> exclude = std::nullopt);

struct LocalFit {
    std::vector<double> weights;
    double bias = 0.0;
    double fit_error = 0.0;
};

inline constexpr double kRidge = 1e-8;

/// Least-squares plane through (inputs[i], targets[i]). The normal system is
/// solved on centered data; when it is rank deficient a ridge of kRidge is
/// added. `fit_error` is the residual sum of squares divided by the row count.
LocalFit fit_local(std::span<const std::vector<double>> inputs, std::span<const double> targets);

/// y = w . x_S + b, where x is the full measurement vector.
double evaluate(const SoftSensor& sensor, std::span<const double> x);

/// c_{p,m} = (sum |w_s| c_s / sum |w_s|) * (1 - e). Requires a non-zero weight.
double soft_reliability(const SoftSensor& sensor, std::span<const double> scores);

/// Select, search, fit and evaluate one soft sensor. Returns nullopt when the
/// pool is too small or the fitted weights are all zero; norm_error and
/// reliability are left for the caller.
std::optional<SoftSensor> construct_soft_sensor(const Topology& topology, std::size_t process,
                                                std::size_t index, double ratio, std::size_t k,
                                                std::span<const HistoryEntry> pool,
                                                std::span<const double> x, Rng& rng,
                                                std::optional<Timestamp> exclude = std::nullopt);

}  // namespace relsen
