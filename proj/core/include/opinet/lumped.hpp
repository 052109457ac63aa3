#pragma once

#include <span>

#include "opinet/model.hpp"
#include "opinet/uniformization.hpp"

namespace opinet {

/// Birth-death chain on {0..N} tracking the number of agents holding
/// opinion 1 in a complete graph of identical two-opinion agents.
class BirthDeathChain {
  public:
    /// mu[j-1] is the birth rate j-1 -> j (1 <= j <= N),
    /// nu[j] is the death rate j+1 -> j (0 <= j <= N-1).
    BirthDeathChain(std::vector<double> mu, std::vector<double> nu);

    int agent_count() const { return static_cast<int>(mu_.size()); }
    double birth_rate(int j) const { return mu_[j - 1]; } ///< j in [1, N]
    double death_rate(int j) const { return nu_[j]; }     ///< j in [0, N-1]
    bool irreducible() const;

    /// Tridiagonal generator over {0..N}.
    SparseGenerator generator() const;

  private:
    std::vector<double> mu_;
    std::vector<double> nu_;
};

/// Lumped chain of the complete-graph two-opinion network:
///   mu_j = (q21 + lambda1 (j-1)/(N-1)) (N-j+1)
///   nu_j = (q12 + lambda2 (N-j-1)/(N-1)) (j+1)
BirthDeathChain build_pa_chain(int n, double q12, double q21, double lambda1,
                               double lambda2);

ProbabilityTrajectory pa_transient(const BirthDeathChain& chain,
                                   const Eigen::VectorXd& p0,
                                   std::span<const double> grid);

/// Transient under a piecewise-constant intensity schedule: the chain is
/// rebuilt at each breakpoint and uniformization continues segment-wise.
ProbabilityTrajectory pa_transient_schedule(int n, double q12, double q21,
                                            const IntensitySchedule& schedule,
                                            const Eigen::VectorXd& p0,
                                            std::span<const double> grid);

/// Product-form stationary distribution, computed in the log domain.
Eigen::VectorXd pa_steady_state(const BirthDeathChain& chain);

struct FractionMoments {
    double mean;     ///< E[n1/N]
    double variance; ///< Var[n1/N]
};
FractionMoments pa_moments(const Eigen::VectorXd& pbar);

/// Stationary E[n1/N] under unbiased influence: q21/(q12+q21),
/// independent of lambda and N.
double uipa_mean_closed_form(double q12, double q21);

/// Stationary Var[n1/N] under unbiased influence lambda.
double uipa_variance_closed_form(int n, double q12, double q21, double lambda);

/// Closed-form stationary E[n1/N] for the three-agent complete graph.
double example_n3_mean_closed_form(double q12, double q21, double lambda1,
                                   double lambda2);

/// Smallest count c with cumulative probability >= q.
int pa_percentile(const Eigen::VectorXd& p, double q);

enum class InitialCountKind { Binomial, Uniform, Deterministic };

/// Initial count distribution over {0..N}: binomial(N, pi1), uniform,
/// or a point mass at `value`.
Eigen::VectorXd initial_count_distribution(InitialCountKind kind, int n,
                                           double pi1 = 0.5, int value = 0);

} // namespace opinet
