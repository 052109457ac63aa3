#pragma once

#include <Eigen/SparseCore>
#include <span>
#include <vector>

namespace opinet {

/// Sparse CTMC transition-rate matrix (Metzler, zero row sums).
using SparseGenerator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Time-indexed probability vectors.
struct ProbabilityTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> distributions;

    std::size_t size() const { return times.size(); }
};

/// Solves pi'(t) = G' pi(t) on the given increasing time grid by
/// uniformization: a Poisson mixture of powers of P = I + G/Lambda with
/// Lambda above the largest exit rate.  Each output vector is nonnegative
/// and renormalized to unit sum; the Poisson tail is truncated at
/// `tail_tol` per step.
ProbabilityTrajectory uniformized_transient(const SparseGenerator& gen,
                                            const Eigen::VectorXd& pi0,
                                            std::span<const double> grid,
                                            double tail_tol = 1e-12);

/// Unit-sum left null vector of an irreducible sparse generator.
/// Sparse LU on the normalization-replaced system, with a power-iteration
/// fallback on the uniformized kernel when the solve degrades.
Eigen::VectorXd sparse_steady_state(const SparseGenerator& gen);

/// Strong connectivity of the off-diagonal support (positive rates).
bool generator_irreducible(const SparseGenerator& gen);

} // namespace opinet
