#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "opinet/errors.hpp"

namespace opinet {

// Opinions are 0-based internally (opinion "1" of the two-opinion model is
// index 0); all file formats and the CLI translate to 1-based indices.

/// Validation outcome of a candidate transition rate matrix.
struct RateMatrixValidation {
    enum class Defect { None, NegativeOffDiagonal, RowSumNonzero, Reducible };
    Defect defect = Defect::None;
    int row = -1; ///< offending row (or unreachable state for Reducible)
    int col = -1;

    bool ok() const { return defect == Defect::None; }
    std::string message() const;
};

RateMatrixValidation validate_rate_matrix(const Eigen::MatrixXd& q);

/// Irreducible CTMC transition rate matrix over M >= 2 opinions.
/// Off-diagonal entries are nonnegative, rows sum to zero.
class RateMatrix {
  public:
    explicit RateMatrix(Eigen::MatrixXd q);

    /// Two-opinion chain with the given switch rates (0->1 and 1->0).
    static RateMatrix two_state(double q12, double q21);

    int opinion_count() const { return static_cast<int>(q_.rows()); }
    double rate(int from, int to) const { return q_(from, to); }
    const Eigen::MatrixXd& matrix() const { return q_; }

    bool operator==(const RateMatrix& other) const { return q_ == other.q_; }

  private:
    Eigen::MatrixXd q_;
};

/// Unique stationary distribution of an irreducible rate matrix
/// (unit-sum left null vector, strictly positive).
Eigen::VectorXd stand_alone_stationary(const RateMatrix& q);

/// Bernoulli variance pi1*(1-pi1) of a two-opinion stationary distribution.
double stand_alone_variance(const RateMatrix& q);

/// Per-opinion influence intensities lambda_j >= 0.
class InfluenceIntensities {
  public:
    explicit InfluenceIntensities(Eigen::VectorXd lambda);
    static InfluenceIntensities uniform(int opinion_count, double lambda);

    int opinion_count() const { return static_cast<int>(lambda_.size()); }
    double operator[](int j) const { return lambda_(j); }
    const Eigen::VectorXd& vector() const { return lambda_; }

    /// True iff all intensities are equal.
    bool unbiased() const;

  private:
    Eigen::VectorXd lambda_;
};

/// Piecewise-constant, right-continuous intensity schedule starting at t=0.
class IntensitySchedule {
  public:
    /// Constant intensities for all time.
    explicit IntensitySchedule(InfluenceIntensities constant);

    /// `breakpoints` are the strictly increasing interior switch times;
    /// `segments` has exactly breakpoints.size()+1 entries.
    IntensitySchedule(std::vector<double> breakpoints,
                      std::vector<InfluenceIntensities> segments);

    const InfluenceIntensities& at(double t) const;
    /// Index of the segment active at time t (right-continuous at breakpoints).
    std::size_t segment_index(double t) const;
    std::size_t segment_count() const { return segments_.size(); }
    const InfluenceIntensities& segment(std::size_t i) const { return segments_[i]; }
    /// Start time of segment i (segment 0 starts at 0).
    double segment_start(std::size_t i) const;
    /// End time of segment i, clamped to `horizon` for the last segment.
    double segment_end(std::size_t i, double horizon) const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    bool constant() const { return breakpoints_.empty(); }
    int opinion_count() const { return segments_.front().opinion_count(); }

  private:
    std::vector<double> breakpoints_;
    std::vector<InfluenceIntensities> segments_;
};

/// Undirected simple graph with 0-based nodes.
class Graph {
  public:
    Graph(int node_count, std::vector<std::pair<int, int>> edges);

    int node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int r) const { return adjacency_[r]; }
    int degree(int r) const { return static_cast<int>(adjacency_[r].size()); }

    /// Edge-list text format: first line "N", then "u v" with 1-based nodes.
    std::string to_edge_list() const;
    static Graph from_edge_list(const std::string& text);

  private:
    int node_count_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Full problem instance: graph, per-agent rate matrices, intensity schedule.
class NetworkModel {
  public:
    /// Identical agents.
    NetworkModel(Graph graph, RateMatrix agent, IntensitySchedule schedule);
    /// Heterogeneous agents; `agents.size()` must equal the node count.
    NetworkModel(Graph graph, std::vector<RateMatrix> agents,
                 IntensitySchedule schedule);

    const Graph& graph() const { return graph_; }
    int agent_count() const { return graph_.node_count(); }
    int opinion_count() const { return agents_.front().opinion_count(); }
    const RateMatrix& agent(int r) const { return agents_[r]; }
    const IntensitySchedule& schedule() const { return schedule_; }

    bool identical_agents() const;

  private:
    Graph graph_;
    std::vector<RateMatrix> agents_;
    IntensitySchedule schedule_;
};

/// Checks entries are nonnegative and sum to 1 within `tol`.
bool is_probability_vector(const Eigen::VectorXd& p, double tol = 1e-12);

} // namespace opinet
