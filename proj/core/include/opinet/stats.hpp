#pragma once

#include "opinet/ssa.hpp"

namespace opinet {

/// Point estimate with a Monte Carlo standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    int sample_size = 0; ///< batches or replications behind the error bar
};

struct MomentEstimates {
    Estimate mean;     ///< time-average of n_j/N
    Estimate variance; ///< time-average of (n_j/N)^2 minus squared mean
};

/// Exact time-weighted stationary moments of n_j/N over (burn_in, t_end],
/// with standard errors from non-overlapping batch means.
MomentEstimates time_average_moments(const SamplePath& path, int opinion,
                                     double burn_in, double t_end,
                                     int batches = 20);

struct BinEstimate {
    double p = 0.0;
    double std_error = 0.0;
};

/// Time-weighted occupancy histogram of the count n_j over {0..N}, pooled
/// across replications; per-bin errors from the spread across replications.
std::vector<BinEstimate> empirical_count_distribution(const Ensemble& ensemble,
                                                      int opinion,
                                                      double window_start,
                                                      double window_end);

} // namespace opinet
