#pragma once

#include <filesystem>

#include "config.hpp"

namespace opinet::cli {

/// Filesystem problems while writing results (distinct exit code).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Artifact {
    std::string file;
    std::string schema; ///< column list, e.g. "i,p"
};

struct RunResult {
    std::filesystem::path directory;
    std::vector<Artifact> artifacts;
};

/// Runs the configured experiment, writing its artifacts plus a resolved
/// config echo (resolved.ini) and a manifest (manifest.json) into out_dir.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);

} // namespace opinet::cli
