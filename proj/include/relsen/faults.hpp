#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relsen {

enum class FaultKind { Short, Noise, Constant };

const char* to_string(FaultKind kind);
FaultKind parse_fault_kind(const std::string& name);

struct FaultSpec {
    FaultKind kind = FaultKind::Short;
    std::string target;
    double intensity = 1.0;          // f
    double short_rate = 0.05;        // SHORT only
    std::size_t min_duration = 10;   // NOISE / CONSTANT
    std::size_t max_duration = 50;
    std::size_t gap = 24;
    std::uint64_t seed = 0;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

/// Faulted series and the mask of contaminated positions.
struct Injection {
    std::vector<double> series;
    std::vector<std::uint8_t> mask;

    std::size_t contaminated() const;
};

/// Half-open [begin, end) segments.
using Segment = std::pair<std::size_t, std::size_t>;

/// Greedy left-to-right schedule: draw a duration, place it, skip `gap`,
/// repeat while a whole segment still fits. Throws DataError if not even one
/// segment of min_duration fits.
std::vector<Segment> schedule_segments(std::size_t length, std::size_t min_duration,
                                       std::size_t max_duration, std::size_t gap,
                                       std::uint64_t seed);

/// Sample standard deviation (n - 1).
double sample_stddev(std::span<const double> series);

/// x + f x on exactly round(rate * N) uniformly chosen points.
Injection inject_short(std::span<const double> series, const FaultSpec& spec);

/// x + N(0, f sigma^2) on scheduled segments.
Injection inject_noise(std::span<const double> series, const FaultSpec& spec, double sigma);

/// x + f sigma on scheduled segments.
Injection inject_constant(std::span<const double> series, const FaultSpec& spec, double sigma);

/// Dispatches on spec.kind.
Injection inject(std::span<const double> series, const FaultSpec& spec, double sigma);

/// Splits [warmup, N) into equal consecutive stages (the last takes the
/// remainder) and injects `spec` into each with that stage's intensity.
/// The warm-up prefix is never touched. sigma comes from the full clean
/// series.
Injection staged_campaign(std::span<const double> series, const FaultSpec& spec,
                          std::size_t warmup, std::span<const double> intensities);

/// A fault spec file: per-sensor faults applied after an untouched prefix,
/// either at each fault's own intensity or as a staged campaign.
struct FaultCampaign {
    std::size_t warmup = 0;
    std::vector<double> stages;  // empty: use each spec's intensity
    std::vector<FaultSpec> faults;
};

/// YAML format documented in README.md. `default_seed` seeds faults that do
/// not name their own. Throws ConfigError with the offending line.
FaultCampaign parse_fault_campaign(const std::string& text, std::uint64_t default_seed,
                                   const std::string& origin = "<fault-spec>");
FaultCampaign load_fault_campaign(const std::filesystem::path& path, std::uint64_t default_seed);

/// Applies every fault in `campaign` to the matching column of `columns`
/// (sensor values of each row, in column order). Returns one mask per
/// column. One fault per sensor.
std::vector<std::vector<std::uint8_t>> apply_campaign(const FaultCampaign& campaign,
                                                      const std::vector<std::string>& columns,
                                                      std::vector<std::vector<double>>& series);

}  // namespace relsen
