#include "opinet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opinet {

namespace {

// Strong connectivity of the directed graph of strictly positive
// off-diagonal rates: every node reachable from node 0 and node 0
// reachable from every node.
bool strongly_connected(const Eigen::MatrixXd& q, int* unreachable) {
    const int m = static_cast<int>(q.rows());
    auto reach = [&](bool reversed) {
        std::vector<char> seen(m, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < m; ++v) {
                if (v == u || seen[v]) continue;
                double rate = reversed ? q(v, u) : q(u, v);
                if (rate > 0.0) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(false);
    auto bwd = reach(true);
    for (int v = 0; v < m; ++v) {
        if (!fwd[v] || !bwd[v]) {
            if (unreachable) *unreachable = v;
            return false;
        }
    }
    return true;
}

} // namespace

std::string RateMatrixValidation::message() const {
    std::ostringstream os;
    switch (defect) {
    case Defect::None:
        return "valid";
    case Defect::NegativeOffDiagonal:
        os << "negative off-diagonal rate at (" << row + 1 << "," << col + 1 << ")";
        break;
    case Defect::RowSumNonzero:
        os << "row " << row + 1 << " does not sum to zero";
        break;
    case Defect::Reducible:
        os << "transition graph not irreducible (state " << row + 1
           << " not strongly connected to state 1)";
        break;
    }
    return os.str();
}

RateMatrixValidation validate_rate_matrix(const Eigen::MatrixXd& q) {
    RateMatrixValidation v;
    const int m = static_cast<int>(q.rows());
    if (m < 2 || q.cols() != m) {
        v.defect = RateMatrixValidation::Defect::Reducible;
        v.row = 0;
        return v;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && q(i, j) < 0.0) {
                v.defect = RateMatrixValidation::Defect::NegativeOffDiagonal;
                v.row = i;
                v.col = j;
                return v;
            }
    const double scale = q.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (int i = 0; i < m; ++i) {
        if (std::abs(q.row(i).sum()) > tol) {
            v.defect = RateMatrixValidation::Defect::RowSumNonzero;
            v.row = i;
            return v;
        }
    }
    int unreachable = -1;
    if (!strongly_connected(q, &unreachable)) {
        v.defect = RateMatrixValidation::Defect::Reducible;
        v.row = unreachable;
        return v;
    }
    return v;
}

RateMatrix::RateMatrix(Eigen::MatrixXd q) : q_(std::move(q)) {
    auto v = validate_rate_matrix(q_);
    if (!v.ok()) {
        if (v.defect == RateMatrixValidation::Defect::Reducible)
            throw ReducibleError("rate matrix: " + v.message());
        throw ValidationError("rate matrix: " + v.message());
    }
}

RateMatrix RateMatrix::two_state(double q12, double q21) {
    Eigen::MatrixXd q(2, 2);
    q << -q12, q12, q21, -q21;
    return RateMatrix(q);
}

Eigen::VectorXd stand_alone_stationary(const RateMatrix& q) {
    // pi' Q = 0 with sum(pi) = 1: replace the last equation of Q' x = 0
    // by the normalization row.
    const int m = q.opinion_count();
    Eigen::MatrixXd a = q.matrix().transpose();
    a.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    return pi;
}

double stand_alone_variance(const RateMatrix& q) {
    if (q.opinion_count() != 2)
        throw ValidationError("stand_alone_variance: requires exactly 2 opinions");
    const double pi1 = stand_alone_stationary(q)(0);
    return pi1 * (1.0 - pi1);
}

InfluenceIntensities::InfluenceIntensities(Eigen::VectorXd lambda)
    : lambda_(std::move(lambda)) {
    if (lambda_.size() < 1)
        throw ValidationError("influence intensities: empty vector");
    for (int j = 0; j < lambda_.size(); ++j)
        if (!(lambda_(j) >= 0.0) || !std::isfinite(lambda_(j)))
            throw ValidationError("influence intensities: lambda_" +
                                  std::to_string(j + 1) + " must be finite and >= 0");
}

InfluenceIntensities InfluenceIntensities::uniform(int opinion_count, double lambda) {
    return InfluenceIntensities(Eigen::VectorXd::Constant(opinion_count, lambda));
}

bool InfluenceIntensities::unbiased() const {
    for (int j = 1; j < lambda_.size(); ++j)
        if (lambda_(j) != lambda_(0)) return false;
    return true;
}

IntensitySchedule::IntensitySchedule(InfluenceIntensities constant)
    : segments_{std::move(constant)} {}

IntensitySchedule::IntensitySchedule(std::vector<double> breakpoints,
                                     std::vector<InfluenceIntensities> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
    if (segments_.size() != breakpoints_.size() + 1)
        throw ValidationError("schedule: need exactly one segment per interval");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i] <= (i == 0 ? 0.0 : breakpoints_[i - 1]))
            throw ValidationError("schedule: breakpoints must be strictly increasing and > 0");
    }
    for (const auto& s : segments_)
        if (s.opinion_count() != segments_.front().opinion_count())
            throw ValidationError("schedule: segments disagree on opinion count");
}

std::size_t IntensitySchedule::segment_index(double t) const {
    // right-continuous: lookup exactly at a breakpoint returns the new segment
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
    if (i > 0 && breakpoints_[i - 1] == t) return i;
    return i;
}

const InfluenceIntensities& IntensitySchedule::at(double t) const {
    return segments_[segment_index(t)];
}

double IntensitySchedule::segment_start(std::size_t i) const {
    return i == 0 ? 0.0 : breakpoints_[i - 1];
}

double IntensitySchedule::segment_end(std::size_t i, double horizon) const {
    return i < breakpoints_.size() ? std::min(breakpoints_[i], horizon) : horizon;
}

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count), edges_(std::move(edges)),
      adjacency_(static_cast<std::size_t>(std::max(node_count, 0))) {
    if (node_count_ < 1) throw ValidationError("graph: need at least one node");
    std::vector<std::pair<int, int>> normalized;
    normalized.reserve(edges_.size());
    for (auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_)
            throw ValidationError("graph: edge endpoint out of range");
        if (u == v) throw ValidationError("graph: self-loop at node " + std::to_string(u + 1));
        if (u > v) std::swap(u, v);
        normalized.emplace_back(u, v);
    }
    std::sort(normalized.begin(), normalized.end());
    if (std::adjacent_find(normalized.begin(), normalized.end()) != normalized.end())
        throw ValidationError("graph: duplicate edge");
    edges_ = std::move(normalized);
    for (const auto& [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::string Graph::to_edge_list() const {
    std::ostringstream os;
    os << node_count_ << "\n";
    for (const auto& [u, v] : edges_) os << u + 1 << " " << v + 1 << "\n";
    return os.str();
}

Graph Graph::from_edge_list(const std::string& text) {
    std::istringstream is(text);
    int n = 0;
    if (!(is >> n)) throw ValidationError("edge list: missing node count");
    std::vector<std::pair<int, int>> edges;
    int u, v;
    while (is >> u >> v) edges.emplace_back(u - 1, v - 1);
    return Graph(n, std::move(edges));
}

NetworkModel::NetworkModel(Graph graph, RateMatrix agent, IntensitySchedule schedule)
    : graph_(std::move(graph)),
      agents_(static_cast<std::size_t>(graph_.node_count()), agent),
      schedule_(std::move(schedule)) {
    if (schedule_.opinion_count() != agents_.front().opinion_count())
        throw ValidationError("network: schedule opinion count mismatch");
}

NetworkModel::NetworkModel(Graph graph, std::vector<RateMatrix> agents,
                           IntensitySchedule schedule)
    : graph_(std::move(graph)), agents_(std::move(agents)),
      schedule_(std::move(schedule)) {
    if (static_cast<int>(agents_.size()) != graph_.node_count())
        throw ValidationError("network: agent count differs from node count");
    for (const auto& a : agents_)
        if (a.opinion_count() != agents_.front().opinion_count())
            throw ValidationError("network: agents disagree on opinion count");
    if (schedule_.opinion_count() != agents_.front().opinion_count())
        throw ValidationError("network: schedule opinion count mismatch");
}

bool NetworkModel::identical_agents() const {
    for (const auto& a : agents_)
        if (!(a == agents_.front())) return false;
    return true;
}

bool is_probability_vector(const Eigen::VectorXd& p, double tol) {
    if (p.size() == 0) return false;
    for (int i = 0; i < p.size(); ++i)
        if (!(p(i) >= -tol)) return false;
    return std::abs(p.sum() - 1.0) <= std::max(tol, 1e-12 * p.size());
}

} // namespace opinet
