#pragma once

#include <span>

#include "opinet/model.hpp"

namespace opinet {

/// Per-agent marginal opinion distributions: row r is agent r's
/// length-M probability vector.
using MarginalField = Eigen::MatrixXd;

struct MarginalTrajectory {
    std::vector<double> times;
    std::vector<MarginalField> fields;
};

/// Propagates all agents' marginals under identical agents and unbiased
/// influence (the closed marginal system; refuses anything else):
///   d/dt pi[r] = Q' pi[r] + lambda (avg_{k in N(r)} pi[k] - pi[r])
/// Isolated agents evolve by the stand-alone equation alone.
MarginalTrajectory marginal_ode_solve(const NetworkModel& network, double lambda,
                                      const MarginalField& initial,
                                      std::span<const double> grid,
                                      double abs_tol = 1e-11);

/// Joint state of a representative agent pair in the unbiased complete-graph
/// two-opinion model; pi12 = pi21 = (1 - pi11 - pi22)/2 is derived.
struct PairJointState {
    double pi11;
    double pi22;
    double pi12() const { return 0.5 * (1.0 - pi11 - pi22); }
};

struct PairJointTrajectory {
    std::vector<double> times;
    std::vector<PairJointState> states;
};

/// Exact solution of the affine pair system
///   x' = -(D + b c') x + b,  D = 2 diag(q12, q21),
///   b = [q21 + lambda/(N-1); q12 + lambda/(N-1)], c = [1;1]
/// via the 2x2 matrix exponential.
PairJointTrajectory pair_joint_ode_solve(int n, double q12, double q21,
                                         double lambda, PairJointState initial,
                                         std::span<const double> grid);

/// Stationary pi11 of the pair system:
///   q21 (lambda + q21 (N-1)) / ((q12+q21)(lambda + (q12+q21)(N-1)))
double pair_joint_stationary(int n, double q12, double q21, double lambda);

} // namespace opinet
