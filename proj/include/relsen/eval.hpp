#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relsen/config.hpp"
#include "relsen/faults.hpp"
#include "relsen/model.hpp"

namespace relsen {

enum class Method { RelSen, Median, Mean, Imc };

const char* to_string(Method method);
Method parse_method(const std::string& name);

/// Mean of each process's sensors, taken on clean (pre-injection) frames.
std::vector<EstimateFrame> ground_truth(std::span<const MeasurementFrame> clean,
                                        const Topology& topology);

/// Mean absolute error of process `p` over aligned series. Throws DataError
/// when lengths or timestamps differ.
double mae(std::span<const EstimateFrame> cleaned, std::span<const EstimateFrame> truth,
           std::size_t p);

/// Output of one cleaning method over a whole stream, in normalized units.
struct MethodOutput {
    std::vector<EstimateFrame> estimates;
    std::vector<std::vector<double>> scores;  // empty for MEDIAN / MEAN
    std::size_t warmup_iterations = 0;
};

/// Runs `method` over raw frames. Every method sees data normalized by a
/// normalizer fitted on the first T frames; IMC uses the window l.
MethodOutput run_method(Method method, const Topology& topology, const Config& config,
                        std::span<const MeasurementFrame> raw);

struct BenchmarkRun {
    Method method = Method::RelSen;
    FaultKind fault = FaultKind::Short;
    std::vector<double> process_mae;
    double average_mae = 0.0;
    double runtime_seconds = 0.0;
    std::string config_snapshot;
};

/// Staged fault campaign parameters applied to one faulty sensor per process.
struct CampaignOptions {
    std::vector<double> intensities{0.75, 1.5, 3.0};
    double short_rate = 0.05;
    std::size_t min_duration = 10;
    std::size_t max_duration = 50;
    std::size_t gap = 24;
};

struct FaultCase {
    FaultKind kind = FaultKind::Short;
    std::vector<std::size_t> faulty_sensors;  // one per process
    std::vector<MeasurementFrame> frames;     // raw, faulted
    std::vector<std::vector<std::uint8_t>> masks;  // [sensor][step]
};

/// Picks one sensor per process at random and applies a staged campaign of
/// `kind` to it after the warm-up span.
FaultCase make_fault_case(const Topology& topology, std::span<const MeasurementFrame> clean,
                          FaultKind kind, std::size_t warmup, const CampaignOptions& campaign,
                          std::uint64_t seed);

struct BenchmarkSetup {
    Topology topology;
    Config config;
    std::vector<MeasurementFrame> clean;  // raw, fault-free
    std::vector<FaultKind> faults{FaultKind::Short, FaultKind::Noise, FaultKind::Constant};
    std::vector<Method> methods{Method::Median, Method::Mean, Method::Imc, Method::RelSen};
    CampaignOptions campaign;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: RELSEN_THREADS or hardware concurrency
};

struct CellResult {
    BenchmarkRun run;
    MethodOutput output;
};

struct BenchmarkReport {
    Topology topology;
    std::size_t warmup = 0;
    std::vector<EstimateFrame> truth;  // normalized
    std::vector<FaultCase> cases;      // aligned with setup.faults
    std::vector<CellResult> cells;     // fault-major, then method
};

/// Full protocol: ground truth, one staged campaign per fault kind, every
/// method on every campaign, MAE over the post-warm-up span. Cells run in
/// parallel; results do not depend on the thread count.
BenchmarkReport run_benchmark(const BenchmarkSetup& setup);

/// Worker count from RELSEN_THREADS, else hardware concurrency, at least 1.
std::size_t worker_threads();

/// Table of per-process and average MAE, one row per (fault, method).
/// Runtimes are excluded so reruns are byte-identical.
void write_report_csv(std::ostream& out, const BenchmarkReport& report);
void write_report_text(std::ostream& out, const BenchmarkReport& report);
void write_timing_csv(std::ostream& out, const BenchmarkReport& report);

/// Long-format (t, series, value) rows: reliability traces of the scoring
/// methods and absolute errors of every method per process.
void write_traces_csv(std::ostream& out, const BenchmarkReport& report);

/// Mean of one sensor's score over rows [begin, end).
double mean_score(const MethodOutput& output, std::size_t sensor, std::size_t begin, std::size_t end);

}  // namespace relsen
