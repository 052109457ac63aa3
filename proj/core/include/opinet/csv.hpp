#pragma once

#include <ostream>

#include "opinet/marginal.hpp"
#include "opinet/ssa.hpp"
#include "opinet/stats.hpp"
#include "opinet/uniformization.hpp"

// CSV emitters for the documented file schemas.  Agents and opinions are
// written 1-based; all numbers use max_digits10 so re-reads are lossless.

namespace opinet::csv {

inline void setup(std::ostream& os) { os.precision(17); }

/// "i,p"
inline void count_distribution(std::ostream& os, const Eigen::VectorXd& p) {
    setup(os);
    os << "i,p\n";
    for (int i = 0; i < p.size(); ++i) os << i << "," << p(i) << "\n";
}

/// "t,i,p"
inline void count_transient(std::ostream& os, const ProbabilityTrajectory& traj) {
    setup(os);
    os << "t,i,p\n";
    for (std::size_t k = 0; k < traj.size(); ++k)
        for (int i = 0; i < traj.distributions[k].size(); ++i)
            os << traj.times[k] << "," << i << "," << traj.distributions[k](i) << "\n";
}

/// "lambda1,lambda2,mean,var"
inline void moment_sweep_header(std::ostream& os) {
    setup(os);
    os << "lambda1,lambda2,mean,var\n";
}
inline void moment_sweep_row(std::ostream& os, double lambda1, double lambda2,
                             double mean, double var) {
    os << lambda1 << "," << lambda2 << "," << mean << "," << var << "\n";
}

/// "t,agent,opinion,prob"
inline void marginal_trajectory(std::ostream& os, const MarginalTrajectory& traj) {
    setup(os);
    os << "t,agent,opinion,prob\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        for (int r = 0; r < traj.fields[k].rows(); ++r)
            for (int j = 0; j < traj.fields[k].cols(); ++j)
                os << traj.times[k] << "," << r + 1 << "," << j + 1 << ","
                   << traj.fields[k](r, j) << "\n";
}

/// "t,pi11,pi22,pi12"
inline void pair_trajectory(std::ostream& os, const PairJointTrajectory& traj) {
    setup(os);
    os << "t,pi11,pi22,pi12\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        os << traj.times[k] << "," << traj.states[k].pi11 << ","
           << traj.states[k].pi22 << "," << traj.states[k].pi12() << "\n";
}

/// "t,mean,p2.5,p97.5" — fraction-of-population summary of a count
/// trajectory with 95% percentile bands.
inline void theory_curve(std::ostream& os, const ProbabilityTrajectory& traj,
                         int n_agents, int (*percentile)(const Eigen::VectorXd&, double)) {
    setup(os);
    os << "t,mean,p2.5,p97.5\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Eigen::VectorXd& p = traj.distributions[k];
        double mean = 0.0;
        for (int i = 0; i < p.size(); ++i) mean += i * p(i);
        os << traj.times[k] << "," << mean / n_agents << ","
           << percentile(p, 0.025) / static_cast<double>(n_agents) << ","
           << percentile(p, 0.975) / static_cast<double>(n_agents) << "\n";
    }
}

/// "t,agent,from,to"
inline void event_log(std::ostream& os, const SamplePath& path) {
    setup(os);
    os << "t,agent,from,to\n";
    for (const auto& ev : path.events)
        os << ev.t << "," << ev.agent + 1 << "," << ev.from + 1 << ","
           << ev.to + 1 << "\n";
}

/// "t,replicate,n1,...,nM"
inline void count_trajectories(std::ostream& os, const Ensemble& ensemble,
                               int opinion_count, std::span<const double> grid) {
    setup(os);
    os << "t,replicate";
    for (int j = 1; j <= opinion_count; ++j) os << ",n" << j;
    os << "\n";
    for (std::size_t k = 0; k < ensemble.paths.size(); ++k) {
        std::vector<std::vector<int>> counts;
        for (int j = 0; j < opinion_count; ++j)
            counts.push_back(path_counts(ensemble.paths[k], j, grid));
        for (std::size_t g = 0; g < grid.size(); ++g) {
            os << grid[g] << "," << k + 1;
            for (int j = 0; j < opinion_count; ++j) os << "," << counts[j][g];
            os << "\n";
        }
    }
}

/// "statistic,value,std_error,n"
inline void statistics_header(std::ostream& os) {
    setup(os);
    os << "statistic,value,std_error,n\n";
}
inline void statistics_row(std::ostream& os, const std::string& name,
                           const Estimate& est) {
    os << name << "," << est.value << "," << est.std_error << ","
       << est.sample_size << "\n";
}

/// "i,p,stderr"
inline void histogram(std::ostream& os, const std::vector<BinEstimate>& bins) {
    setup(os);
    os << "i,p,stderr\n";
    for (std::size_t i = 0; i < bins.size(); ++i)
        os << i << "," << bins[i].p << "," << bins[i].std_error << "\n";
}

} // namespace opinet::csv
