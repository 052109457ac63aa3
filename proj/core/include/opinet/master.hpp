#pragma once

#include <cstdint>
#include <string>

#include "opinet/model.hpp"
#include "opinet/uniformization.hpp"

namespace opinet {

/// Mixed-radix encoding of joint opinion tuples, agent 0 most significant:
/// index = sum_r opinion[r] * M^(N-1-r).  Lexicographic order of tuples
/// matches index order.
class MasterStateSpace {
  public:
    MasterStateSpace(int agent_count, int opinion_count,
                     std::int64_t max_states = default_guard());

    static std::int64_t default_guard() { return std::int64_t{1} << 24; }

    std::int64_t state_count() const { return dim_; }
    int agent_count() const { return agents_; }
    int opinion_count() const { return opinions_; }

    std::int64_t encode(std::span<const int> opinions) const;
    void decode(std::int64_t index, std::span<int> opinions) const;
    /// Opinion of agent r in the given state.
    int opinion_of(std::int64_t index, int r) const;
    /// Index of the state with agent r's opinion replaced by j.
    std::int64_t with_opinion(std::int64_t index, int r, int current, int j) const;

  private:
    int agents_;
    int opinions_;
    std::int64_t dim_;
    std::vector<std::int64_t> weight_; // M^(N-1-r)
};

/// Kronecker-sum generator of the non-interacting network.
SparseGenerator build_noninteracting_generator(
    const NetworkModel& network,
    std::int64_t max_states = MasterStateSpace::default_guard());

/// Influence part: rate toward replacing agent r's opinion by j equals
/// lambda_j * (#neighbours of r with opinion j) / degree(r), zero for
/// isolated agents; diagonal makes rows sum to zero.
SparseGenerator build_interaction_generator(
    const NetworkModel& network, const InfluenceIntensities& lambdas,
    std::int64_t max_states = MasterStateSpace::default_guard());

/// Q0 + A0 with the intensities of the network's first schedule segment.
SparseGenerator build_master_generator(
    const NetworkModel& network,
    std::int64_t max_states = MasterStateSpace::default_guard());

ProbabilityTrajectory master_transient(const SparseGenerator& gen,
                                       const Eigen::VectorXd& pi0,
                                       std::span<const double> grid);

Eigen::VectorXd master_steady_state(const SparseGenerator& gen);

/// Length-M marginal of agent r.
Eigen::VectorXd marginal_of_agent(const Eigen::VectorXd& pi,
                                  const MasterStateSpace& space, int r);

/// M x M joint distribution of agents r and s (r != s).
Eigen::MatrixXd pair_joint(const Eigen::VectorXd& pi,
                           const MasterStateSpace& space, int r, int s);

/// Distribution of the number of agents holding `opinion`, over {0..N}.
Eigen::VectorXd count_distribution(const Eigen::VectorXd& pi,
                                   const MasterStateSpace& space, int opinion);

/// Coordinate text format: header "dim nnz", then "row col value" (0-based).
std::string generator_to_coo(const SparseGenerator& gen);

} // namespace opinet
