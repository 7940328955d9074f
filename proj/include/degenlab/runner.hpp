#pragma once

#include "degenlab/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace degenlab {

// Exit codes of `run` and `verify_all`.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitAcceptance = 2, kExitInternal = 3 };

struct RunOptions {
    std::optional<std::filesystem::path> out; // overrides DEGENLAB_OUT and the config
    std::optional<std::uint64_t> seed;
    int jobs = 0;                             // 0 keeps the OpenMP default
    std::string expected_command;             // CLI subcommand; must match the config when set
};

struct Criterion {
    std::string name;
    double value = 0;
    std::string limit;
    bool pass = false;
};

struct RunReport {
    std::string command;
    std::vector<Criterion> criteria;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs; // paths relative to the output directory
    bool pass() const;
};

// Runs one validated experiment, writing artifacts into `out_dir`.
RunReport execute(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

std::filesystem::path resolve_output(const ExperimentConfig& cfg, const RunOptions& opt);
std::string error_json(const std::string& kind, const std::string& message);

int run(const std::filesystem::path& config, const RunOptions& opt, std::ostream& out, std::ostream& err);
int verify_all(const std::filesystem::path& suite, const RunOptions& opt, std::ostream& out, std::ostream& err);

} // namespace degenlab
