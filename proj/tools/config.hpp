#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opinet/model.hpp"
#include "opinet/topology.hpp"

namespace opinet::cli {

/// Syntactic problems with a config file (unknown section/key, bad number,
/// missing required key).  Distinct from semantic ValidationError so the
/// front end can map them to different exit codes.
class ConfigParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raw section -> key -> value view of an INI-style file.  Values keep
/// their whitespace-trimmed text; '#' and ';' start comments.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_ini(const std::string& text);
RawConfig load_ini(const std::filesystem::path& path);

struct ModelBlock {
    int opinions = 2;
    std::vector<double> q; ///< row-major opinions x opinions generator
};

struct InfluenceBlock {
    std::vector<double> breakpoints;         ///< interior segment starts
    std::vector<std::vector<double>> lambda; ///< per segment, length M
    /// Optional stationary-moment sweep (lumped solver): one intensity
    /// vector per row of the output table.
    std::vector<std::vector<double>> sweep;
};

struct GraphBlock {
    std::optional<TopologySpec> spec;
    std::string edges_path; ///< alternative: load an edge-list file
};

struct RunBlock {
    std::string solver; ///< master | lumped | marginal | pair | ssa
    double t_end = 0.0;
    int grid_points = 0;
    int replications = 1;
    std::uint64_t seed = 1;
    double burn_in = -1.0; ///< <0 means the default 10/(q12+q21)
    int threads = 0;
    int batches = 20;
    /// binomial | uniform | deterministic | stationary | iid | all
    std::string init = "binomial";
    double init_p = 0.5; ///< P(opinion 1) for binomial / iid
    int init_value = 0;  ///< count (deterministic) or opinion (all), 1-based
    bool write_events = false;
};

struct OutputBlock {
    std::string directory;
    std::string format = "csv";
};

struct ExperimentConfig {
    ModelBlock model;
    InfluenceBlock influence;
    GraphBlock graph;
    RunBlock run;
    OutputBlock output;
};

/// Parses and semantically validates a config; throws ConfigParseError for
/// syntax/shape problems and ValidationError (naming the offending field)
/// for out-of-range values.
ExperimentConfig parse_config(const RawConfig& raw);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Serializes a fully resolved config back to INI text; parsing the result
/// reproduces the same experiment.
std::string to_ini(const ExperimentConfig& cfg);

/// Materializes the model objects described by the config.
RateMatrix config_rate_matrix(const ExperimentConfig& cfg);
IntensitySchedule config_schedule(const ExperimentConfig& cfg);
Graph config_graph(const ExperimentConfig& cfg);
NetworkModel config_network(const ExperimentConfig& cfg);

} // namespace opinet::cli
