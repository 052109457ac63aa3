#pragma once

#include "config.hpp"

namespace opinet::cli {

class UnknownPreset : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One experiment of a preset: the config plus the subdirectory (relative
/// to the preset output root) its results go into.
struct PresetRun {
    std::string subdir;
    ExperimentConfig config;
};

std::vector<std::string> preset_names();

/// Expands a named preset into its experiment configs.  `seed` overrides
/// the preset's default master seed.
std::vector<PresetRun> expand_preset(const std::string& name,
                                     std::uint64_t seed = 1);

} // namespace opinet::cli
