#pragma once

#include <cstdint>
#include <span>
#include <variant>

#include "opinet/model.hpp"

namespace opinet {

/// One opinion change on a sample path.
struct Event {
    double t;
    int agent;
    int from;
    int to;
};

/// Event-level realization of the interacting-agent process.
struct SamplePath {
    std::vector<int> initial; ///< opinion per agent at t=0
    std::vector<Event> events;
    double t_end = 0.0;
    std::uint64_t seed = 0;

    /// Opinion of agent r at time t (events strictly before or at t applied).
    int opinion_at(int r, double t) const;
};

/// Initial-opinion specifications.
struct InitIid {
    Eigen::VectorXd pi0;
};
struct InitFixed {
    std::vector<int> opinions;
};
struct InitAll {
    int opinion;
};
using InitSpec = std::variant<InitIid, InitFixed, InitAll>;

std::vector<int> sample_initial(const InitSpec& spec, int n, int opinion_count,
                                std::uint64_t seed);

/// Statistically exact realization of the network CTMC: each agent jumps
/// i -> j at rate q_ij + lambda_j(t) * (neighbour fraction with opinion j),
/// with the intensity schedule applied segment-wise (rates are constant
/// within a segment, so segment-wise direct SSA is exact).
SamplePath simulate_path(const NetworkModel& network,
                         const std::vector<int>& sigma0, double t_end,
                         std::uint64_t seed);

struct Ensemble {
    std::vector<SamplePath> paths;
    std::uint64_t master_seed = 0;
};

/// R independent replications; replication k's seed derives deterministically
/// from (master_seed, k) so results are independent of thread scheduling.
Ensemble run_ensemble(const NetworkModel& network, const InitSpec& init,
                      double t_end, int replications, std::uint64_t master_seed,
                      int threads = 0);

/// Piecewise-constant count n_opinion(t) evaluated at the grid times.
std::vector<int> path_counts(const SamplePath& path, int opinion,
                             std::span<const double> grid);

/// Debug/verification helper: recomputes every agent's jump-rate row from
/// scratch at time t (used to validate the incremental rate table).
Eigen::MatrixXd instantaneous_rates(const NetworkModel& network,
                                    const std::vector<int>& opinions, double t);

} // namespace opinet
