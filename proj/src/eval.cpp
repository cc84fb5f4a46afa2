#include "relsen/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "relsen/baselines.hpp"
#include "relsen/csv.hpp"
#include "relsen/errors.hpp"
#include "relsen/pipeline.hpp"
#include "relsen/random.hpp"

namespace relsen {

const char* to_string(Method method) {
    switch (method) {
        case Method::RelSen: return "relsen";
        case Method::Median: return "median";
        case Method::Mean: return "mean";
        case Method::Imc: return "imc";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "relsen") return Method::RelSen;
    if (name == "median") return Method::Median;
    if (name == "mean") return Method::Mean;
    if (name == "imc") return Method::Imc;
    throw ConfigError("unknown method '" + name + "' (expected relsen, median, mean or imc)");
}

std::vector<EstimateFrame> ground_truth(std::span<const MeasurementFrame> clean,
                                        const Topology& topology) {
    std::vector<EstimateFrame> out;
    out.reserve(clean.size());
    for (const auto& f : clean) out.push_back(mean_clean(f, topology));
    return out;
}

double mae(std::span<const EstimateFrame> cleaned, std::span<const EstimateFrame> truth,
           std::size_t p) {
    if (cleaned.size() != truth.size()) throw DataError("MAE series differ in length");
    if (cleaned.empty()) throw DataError("MAE over an empty span");
    double sum = 0.0;
    for (std::size_t i = 0; i < cleaned.size(); ++i) {
        if (cleaned[i].t != truth[i].t)
            throw DataError("MAE series misaligned at t=" + std::to_string(cleaned[i].t));
        sum += std::abs(cleaned[i].states[p] - truth[i].states[p]);
    }
    return sum / static_cast<double>(cleaned.size());
}

MethodOutput run_method(Method method, const Topology& topology, const Config& config,
                        std::span<const MeasurementFrame> raw) {
    const auto T = config.warmup_length;
    if (raw.size() < T) {
        throw ConfigError("warm-up length T=" + std::to_string(T) + " exceeds the " +
                          std::to_string(raw.size()) + " available rows");
    }
    MethodOutput out;
    out.estimates.reserve(raw.size());

    if (method == Method::RelSen) {
        auto engine = Engine::bootstrap(topology, config, raw.first(T));
        out.estimates = engine.warmup_estimates();
        out.scores.assign(T, engine.warmup().scores);
        out.warmup_iterations = engine.warmup().iterations;
        for (std::size_t i = T; i < raw.size(); ++i) {
            auto r = engine.step(raw[i]);
            out.estimates.push_back(std::move(r.estimate));
            out.scores.push_back(std::move(r.scores));
        }
        return out;
    }

    for (const auto& f : raw) validate_frame(f, topology);
    validate_consecutive(raw);
    const auto normalizer = Normalizer::fit(raw.first(T));
    std::optional<ImcCleaner> imc;
    if (method == Method::Imc) imc.emplace(topology, config.window);
    for (const auto& f : raw) {
        const auto x = normalizer.normalize(f);
        switch (method) {
            case Method::Median: out.estimates.push_back(median_clean(x, topology)); break;
            case Method::Mean: out.estimates.push_back(mean_clean(x, topology)); break;
            case Method::Imc: {
                auto [z, c] = imc->step(x);
                out.estimates.push_back(std::move(z));
                out.scores.push_back(std::move(c));
                break;
            }
            case Method::RelSen: break;
        }
    }
    return out;
}

FaultCase make_fault_case(const Topology& topology, std::span<const MeasurementFrame> clean,
                          FaultKind kind, std::size_t warmup, const CampaignOptions& campaign,
                          std::uint64_t seed) {
    FaultCase fc;
    fc.kind = kind;
    fc.frames.assign(clean.begin(), clean.end());
    fc.masks.assign(topology.sensor_count(), std::vector<std::uint8_t>(clean.size(), 0));
    const auto kind_key = static_cast<std::uint64_t>(kind) + 1;

    for (std::size_t p = 0; p < topology.process_count(); ++p) {
        const auto& members = topology.sensors_of(p);
        auto rng = substream(seed, {0x464155ULL, kind_key, p});
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        const auto s = members[pick(rng)];
        fc.faulty_sensors.push_back(s);

        std::vector<double> series(clean.size());
        for (std::size_t i = 0; i < clean.size(); ++i) series[i] = clean[i].values[s];

        FaultSpec spec;
        spec.kind = kind;
        spec.target = topology.sensor_name(s);
        spec.short_rate = campaign.short_rate;
        spec.min_duration = campaign.min_duration;
        spec.max_duration = campaign.max_duration;
        spec.gap = campaign.gap;
        spec.seed = mix64(seed ^ mix64(kind_key * 1000003ULL + s));
        const auto inj = staged_campaign(series, spec, warmup, campaign.intensities);
        for (std::size_t i = 0; i < clean.size(); ++i) fc.frames[i].values[s] = inj.series[i];
        fc.masks[s] = inj.mask;
    }
    return fc;
}

std::size_t worker_threads() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RELSEN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = static_cast<std::size_t>(v);
    }
    return n;
}

BenchmarkReport run_benchmark(const BenchmarkSetup& setup) {
    const auto& topo = setup.topology;
    const auto T = setup.config.warmup_length;
    setup.config.validate(topo);
    if (setup.clean.size() <= T) {
        throw ConfigError("benchmark needs data beyond the warm-up length T=" + std::to_string(T));
    }
    for (const auto& f : setup.clean) validate_frame(f, topo);
    validate_consecutive(setup.clean);

    BenchmarkReport report;
    report.topology = topo;
    report.warmup = T;
    const auto normalizer = Normalizer::fit(std::span(setup.clean).first(T));
    std::vector<MeasurementFrame> clean_norm;
    clean_norm.reserve(setup.clean.size());
    for (const auto& f : setup.clean) clean_norm.push_back(normalizer.normalize(f));
    report.truth = ground_truth(clean_norm, topo);

    for (auto kind : setup.faults) {
        report.cases.push_back(
            make_fault_case(topo, setup.clean, kind, T, setup.campaign, setup.seed));
    }

    const auto snapshot = dump_config({topo, setup.config});
    const auto nm = setup.methods.size();
    const auto cells = report.cases.size() * nm;
    report.cells.resize(cells);

    const std::span<const EstimateFrame> truth_eval = std::span(report.truth).subspan(T);
    auto run_cell = [&](std::size_t idx) {
        const auto& fc = report.cases[idx / nm];
        const auto method = setup.methods[idx % nm];
        const auto start = std::chrono::steady_clock::now();
        auto output = run_method(method, topo, setup.config, fc.frames);
        const auto stop = std::chrono::steady_clock::now();

        BenchmarkRun run;
        run.method = method;
        run.fault = fc.kind;
        run.runtime_seconds = std::chrono::duration<double>(stop - start).count();
        run.config_snapshot = snapshot;
        const std::span<const EstimateFrame> est = std::span(output.estimates).subspan(T);
        for (std::size_t p = 0; p < topo.process_count(); ++p)
            run.process_mae.push_back(mae(est, truth_eval, p));
        double sum = 0.0;
        for (double v : run.process_mae) sum += v;
        run.average_mae = sum / static_cast<double>(run.process_mae.size());
        report.cells[idx] = {std::move(run), std::move(output)};
    };

    const auto workers = std::min(cells, setup.threads ? setup.threads : worker_threads());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells; ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (auto i = next++; i < cells; i = next++) {
                    try {
                        run_cell(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    return report;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "fault,method";
    for (const auto& p : report.topology.process_names()) out << ',' << p;
    out << ",average\n";
    for (const auto& cell : report.cells) {
        const auto& r = cell.run;
        out << to_string(r.fault) << ',' << to_string(r.method);
        for (double v : r.process_mae) out << ',' << format_double(v);
        out << ',' << format_double(r.average_mae) << '\n';
    }
}

void write_report_text(std::ostream& out, const BenchmarkReport& report) {
    const auto& names = report.topology.process_names();
    out << "Mean absolute error of cleaned data (normalized units), post-warm-up span\n\n";
    out << std::left << std::setw(10) << "fault" << std::setw(8) << "method";
    for (const auto& p : names) out << std::right << std::setw(9) << p;
    out << std::right << std::setw(9) << "avg" << '\n';
    for (const auto& cell : report.cells) {
        const auto& r = cell.run;
        out << std::left << std::setw(10) << to_string(r.fault) << std::setw(8) << to_string(r.method);
        out << std::right << std::fixed << std::setprecision(4);
        for (double v : r.process_mae) out << std::setw(9) << v;
        out << std::setw(9) << r.average_mae << '\n';
        out.unsetf(std::ios::floatfield);
    }
    out << "\nFaulty sensors:\n";
    for (const auto& fc : report.cases) {
        out << "  " << to_string(fc.kind) << ':';
        for (auto s : fc.faulty_sensors) out << ' ' << report.topology.sensor_name(s);
        out << '\n';
    }
}

void write_timing_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "fault,method,runtime_seconds\n";
    for (const auto& cell : report.cells) {
        out << to_string(cell.run.fault) << ',' << to_string(cell.run.method) << ','
            << format_double(cell.run.runtime_seconds) << '\n';
    }
}

void write_traces_csv(std::ostream& out, const BenchmarkReport& report) {
    const auto& topo = report.topology;
    out << "t,series,value\n";
    const auto nm = report.cases.empty() ? 0 : report.cells.size() / report.cases.size();
    for (std::size_t f = 0; f < report.cases.size(); ++f) {
        const auto& fc = report.cases[f];
        const std::string fault = to_string(fc.kind);
        const auto normalizer = Normalizer::fit(std::span(fc.frames).first(report.warmup));
        for (auto s : fc.faulty_sensors) {
            const auto p = topo.process_of(s);
            const auto series = fault + "/raw/abs_error/" + topo.sensor_name(s);
            // raw faulted reading in normalized units, relative to truth
            for (std::size_t i = 0; i < fc.frames.size(); ++i) {
                const double x = normalizer.normalize_value(s, fc.frames[i].values[s]);
                out << fc.frames[i].t << ',' << series << ','
                    << format_double(std::abs(x - report.truth[i].states[p])) << '\n';
            }
        }
        for (std::size_t m = 0; m < nm; ++m) {
            const auto& cell = report.cells[f * nm + m];
            const std::string method = to_string(cell.run.method);
            const auto& o = cell.output;
            for (std::size_t p = 0; p < topo.process_count(); ++p) {
                const auto series = fault + "/" + method + "/abs_error/" + topo.process_name(p);
                for (std::size_t i = 0; i < o.estimates.size(); ++i) {
                    out << o.estimates[i].t << ',' << series << ','
                        << format_double(std::abs(o.estimates[i].states[p] - report.truth[i].states[p]))
                        << '\n';
                }
            }
            if (o.scores.empty()) continue;
            for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
                const auto series = fault + "/" + method + "/score/" + topo.sensor_name(s);
                for (std::size_t i = 0; i < o.scores.size(); ++i) {
                    out << o.estimates[i].t << ',' << series << ',' << format_double(o.scores[i][s])
                        << '\n';
                }
            }
        }
    }
}

double mean_score(const MethodOutput& output, std::size_t sensor, std::size_t begin, std::size_t end) {
    if (begin >= end || end > output.scores.size()) throw DataError("empty or out-of-range score span");
    double sum = 0.0;
    for (auto i = begin; i < end; ++i) sum += output.scores[i][sensor];
    return sum / static_cast<double>(end - begin);
}

}  // namespace relsen
