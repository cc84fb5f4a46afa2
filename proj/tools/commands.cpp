#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "relsen/baselines.hpp"
#include "relsen/config.hpp"
#include "relsen/csv.hpp"
#include "relsen/errors.hpp"
#include "relsen/eval.hpp"
#include "relsen/faults.hpp"
#include "relsen/pipeline.hpp"
#include "relsen/synth.hpp"

namespace relsen::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void validate(const RunManifest& m) {
    require(!m.output.empty(), "--output is required");
    auto need_file = [](const fs::path& p, const char* flag) {
        require(!p.empty(), std::string(flag) + " is required for this mode");
        require(fs::exists(p), std::string(flag) + " path does not exist: " + p.string());
    };
    switch (m.mode) {
        case Mode::Run:
            need_file(m.input, "--input");
            need_file(m.config, "--config");
            parse_method(m.method);
            break;
        case Mode::Inject:
            need_file(m.input, "--input");
            need_file(m.fault_spec, "--fault-spec");
            break;
        case Mode::Bench:
            if (!m.input.empty()) {
                need_file(m.input, "--input");
                need_file(m.config, "--config");
            } else if (!m.config.empty()) {
                need_file(m.config, "--config");
            }
            break;
        case Mode::Synth:
            break;
    }
}

int cmd_run(const RunManifest& m) {
    auto setup = load_config(m.config);
    if (m.seed) setup.config.seed = *m.seed;
    const auto method = parse_method(m.method);
    const auto& topo = setup.topology;
    const auto T = setup.config.warmup_length;

    std::ifstream in(m.input);
    if (!in) throw DataError("cannot open " + m.input.string());
    CsvFrameReader reader(in, m.input.string());
    const ColumnMapping mapping(reader.columns(), topo);

    std::vector<MeasurementFrame> head;
    while (head.size() < T) {
        auto row = reader.next();
        if (!row) break;
        head.push_back(mapping.apply(*row));
    }
    if (head.size() < T) {
        throw ConfigError("warm-up length T=" + std::to_string(T) + " exceeds the " +
                          std::to_string(head.size()) + " rows in " + m.input.string());
    }

    ensure_dir(m.output);
    auto cleaned = open_out(m.output / "cleaned.csv");
    write_csv_header(cleaned, topo.process_names());
    std::optional<std::ofstream> scores;
    std::optional<std::ofstream> trace;
    auto open_scores = [&] {
        scores = open_out(m.output / "scores.csv");
        write_csv_header(*scores, topo.sensor_names());
        trace = open_out(m.output / "reliability_trace.csv");
        *trace << "t,sensor,score\n";
    };
    auto emit_scores = [&](Timestamp t, const std::vector<double>& c) {
        write_csv_row(*scores, t, c);
        for (std::size_t s = 0; s < c.size(); ++s)
            *trace << t << ',' << topo.sensor_name(s) << ',' << format_double(c[s]) << '\n';
        scores->flush();
        trace->flush();
    };

    if (method == Method::RelSen) {
        auto engine = Engine::bootstrap(topo, setup.config, head);
        for (auto s : engine.normalizer().degenerate_sensors())
            std::cerr << "warning: sensor '" << topo.sensor_name(s)
                      << "' is constant over the warm-up; it normalizes to 0.5\n";
        open_scores();
        const auto& wu = engine.warmup();
        for (const auto& e : engine.warmup_estimates()) {
            write_csv_row(cleaned, e.t, e.states);
            emit_scores(e.t, wu.scores);
        }
        cleaned.flush();

        nlohmann::ordered_json summary;
        summary["iterations"] = wu.iterations;
        summary["converged"] = wu.status == WarmupStatus::Converged;
        summary["final_objective"] = wu.final_objective();
        summary["objective_trace"] = wu.objective_trace;
        for (std::size_t s = 0; s < topo.sensor_count(); ++s)
            summary["scores"][topo.sensor_name(s)] = wu.scores[s];
        open_out(m.output / "warmup_summary.json") << summary.dump(2) << '\n';
        if (wu.status != WarmupStatus::Converged) {
            std::cerr << "warning: warm-up hit the iteration cap (" << wu.iterations
                      << ") before converging\n";
        }

        std::size_t skipped = 0;
        while (auto row = reader.next()) {
            auto r = engine.step(mapping.apply(*row));
            skipped += r.soft_sensors_skipped;
            write_csv_row(cleaned, r.estimate.t, r.estimate.states);
            cleaned.flush();
            emit_scores(r.estimate.t, r.scores);
        }
        if (skipped > 0) std::cerr << "note: " << skipped << " soft sensors skipped for lack of history\n";
        return kOk;
    }

    for (const auto& f : head) validate_frame(f, topo);
    validate_consecutive(head);
    const auto normalizer = Normalizer::fit(head);
    for (auto s : normalizer.degenerate_sensors())
        std::cerr << "warning: sensor '" << topo.sensor_name(s)
                  << "' is constant over the warm-up; it normalizes to 0.5\n";
    std::optional<ImcCleaner> imc;
    if (method == Method::Imc) {
        imc.emplace(topo, setup.config.window);
        open_scores();
    }
    Timestamp last = head.front().t - 1;
    auto process = [&](const MeasurementFrame& raw) {
        validate_frame(raw, topo);
        if (raw.t != last + 1)
            throw DataError("timestamp gap: expected t=" + std::to_string(last + 1) + ", got t=" +
                            std::to_string(raw.t));
        last = raw.t;
        const auto x = normalizer.normalize(raw);
        if (method == Method::Median) {
            write_csv_row(cleaned, x.t, median_clean(x, topo).states);
        } else if (method == Method::Mean) {
            write_csv_row(cleaned, x.t, mean_clean(x, topo).states);
        } else {
            auto [z, c] = imc->step(x);
            write_csv_row(cleaned, x.t, z.states);
            emit_scores(x.t, c);
        }
        cleaned.flush();
    };
    for (const auto& f : head) process(f);
    while (auto row = reader.next()) process(mapping.apply(*row));
    return kOk;
}

int cmd_inject(const RunManifest& m) {
    const auto campaign = load_fault_campaign(m.fault_spec, m.seed.value_or(0));
    auto table = read_sensor_csv(m.input);
    validate_consecutive(table.rows);

    std::vector<std::vector<double>> series(table.columns.size(),
                                            std::vector<double>(table.rows.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t c = 0; c < table.columns.size(); ++c) series[c][i] = table.rows[i].values[c];

    const auto masks = apply_campaign(campaign, table.columns, series);

    ensure_dir(m.output);
    auto faulted = open_out(m.output / "faulted.csv");
    auto mask = open_out(m.output / "mask.csv");
    write_csv_header(faulted, table.columns);
    write_csv_header(mask, table.columns);
    std::vector<double> row(table.columns.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = series[c][i];
        write_csv_row(faulted, table.rows[i].t, row);
        mask << table.rows[i].t;
        for (std::size_t c = 0; c < row.size(); ++c) mask << ',' << int{masks[c][i]};
        mask << '\n';
    }
    return kOk;
}

int cmd_bench(const RunManifest& m) {
    const auto seed = m.seed.value_or(1);
    BenchmarkSetup setup;
    setup.seed = seed;
    if (!m.input.empty()) {
        auto cfg = load_config(m.config);
        setup.topology = cfg.topology;
        setup.config = cfg.config;
        setup.clean = read_frames(m.input, setup.topology);
    } else {
        SynthOptions so;
        so.seed = seed;
        if (m.length) so.length = *m.length;
        auto data = synthesize(so);
        setup.topology = data.topology;
        setup.config = Config::defaults_for(setup.topology);
        if (!m.config.empty()) {
            auto cfg = load_config(m.config);
            if (!(cfg.topology == setup.topology))
                throw ConfigError("config topology does not match the synthetic deployment");
            setup.config = cfg.config;
        }
        setup.clean = std::move(data.frames);
    }
    if (m.seed || m.input.empty()) setup.config.seed = seed;

    const auto report = run_benchmark(setup);
    ensure_dir(m.output);
    {
        auto out = open_out(m.output / "report.csv");
        write_report_csv(out, report);
    }
    {
        auto out = open_out(m.output / "report.txt");
        write_report_text(out, report);
    }
    {
        auto out = open_out(m.output / "traces.csv");
        write_traces_csv(out, report);
    }
    {
        auto out = open_out(m.output / "timing.csv");
        write_timing_csv(out, report);
    }
    open_out(m.output / "config_snapshot.yaml") << dump_config({setup.topology, setup.config});
    write_report_text(std::cout, report);
    return kOk;
}

int cmd_synth(const RunManifest& m) {
    SynthOptions so;
    so.seed = m.seed.value_or(1);
    if (m.length) so.length = *m.length;
    const auto data = synthesize(so);

    ensure_dir(m.output);
    write_frames(m.output / "data.csv", data.topology.sensor_names(), data.frames);
    {
        auto out = open_out(m.output / "latent.csv");
        write_csv_header(out, data.topology.process_names());
        for (const auto& f : data.latent) write_csv_row(out, f.t, f.states);
    }
    auto cfg = Config::defaults_for(data.topology);
    cfg.seed = so.seed;
    open_out(m.output / "config.yaml") << dump_config({data.topology, cfg});
    return kOk;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"relsen: online sensor reliability scoring and data cleaning"};
    RunManifest m;
    std::string mode = "run";
    std::uint64_t seed = 0;
    std::size_t length = 0;
    app.add_option("--mode", mode, "run | inject | bench | synth")
        ->check(CLI::IsMember({"run", "inject", "bench", "synth"}));
    app.add_option("--input", m.input, "input CSV (t, sensor columns)");
    app.add_option("--config", m.config, "YAML config: topology and engine parameters");
    app.add_option("--output", m.output, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "seed override");
    app.add_option("--method", m.method, "relsen | median | mean | imc")
        ->check(CLI::IsMember({"relsen", "median", "mean", "imc"}));
    app.add_option("--fault-spec", m.fault_spec, "YAML fault campaign (inject mode)");
    auto* length_opt = app.add_option("--length", length, "rows to synthesize (synth, bench)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (*seed_opt) m.seed = seed;
    if (*length_opt) m.length = length;
    m.mode = mode == "run"      ? Mode::Run
             : mode == "inject" ? Mode::Inject
             : mode == "bench"  ? Mode::Bench
                                : Mode::Synth;

    try {
        validate(m);
        switch (m.mode) {
            case Mode::Run: return cmd_run(m);
            case Mode::Inject: return cmd_inject(m);
            case Mode::Bench: return cmd_bench(m);
            case Mode::Synth: return cmd_synth(m);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}

}  // namespace relsen::cli
