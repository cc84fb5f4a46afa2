#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace relsen::cli {

enum class Mode { Run, Inject, Bench, Synth };

/// What one invocation was asked to do.
struct RunManifest {
    Mode mode = Mode::Run;
    std::filesystem::path input;
    std::filesystem::path config;
    std::filesystem::path output;
    std::filesystem::path fault_spec;
    std::string method = "relsen";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> length;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

/// Checks mode-specific required flags and that referenced inputs exist.
/// Throws ConfigError.
void validate(const RunManifest& manifest);

int cmd_run(const RunManifest& manifest);
int cmd_inject(const RunManifest& manifest);
int cmd_bench(const RunManifest& manifest);
int cmd_synth(const RunManifest& manifest);

/// Parses arguments, dispatches, and maps exceptions to exit codes.
int main_entry(int argc, char** argv);

}  // namespace relsen::cli
