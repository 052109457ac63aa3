#include "opinet/stats.hpp"

#include <cmath>

#include "opinet/errors.hpp"

namespace opinet {

namespace {

// Step function n_j(t) as (time, count) change points starting at t=0.
struct StepFunction {
    std::vector<double> times;
    std::vector<int> counts;
};

StepFunction count_steps(const SamplePath& path, int opinion) {
    StepFunction sf;
    int count = 0;
    for (int op : path.initial)
        if (op == opinion) ++count;
    sf.times.push_back(0.0);
    sf.counts.push_back(count);
    for (const auto& ev : path.events) {
        int delta = (ev.to == opinion) - (ev.from == opinion);
        if (delta == 0) continue;
        count += delta;
        sf.times.push_back(ev.t);
        sf.counts.push_back(count);
    }
    return sf;
}

// Time integrals of (n/N) and (n/N)^2 over [from, to), plus the number of
// change points inside the window.
struct WindowSums {
    double ix = 0.0;
    double ixx = 0.0;
    long jumps = 0;
};

WindowSums integrate(const StepFunction& sf, int n_agents, double from, double to) {
    WindowSums w;
    for (std::size_t i = 0; i < sf.times.size(); ++i) {
        const double seg_start = std::max(sf.times[i], from);
        const double seg_end =
            std::min(i + 1 < sf.times.size() ? sf.times[i + 1] : to, to);
        if (seg_end <= seg_start) {
            if (sf.times[i] >= to) break;
            continue;
        }
        const double x = static_cast<double>(sf.counts[i]) / n_agents;
        const double dt = seg_end - seg_start;
        w.ix += x * dt;
        w.ixx += x * x * dt;
        if (sf.times[i] > from && sf.times[i] <= to && i > 0) ++w.jumps;
    }
    return w;
}

} // namespace

MomentEstimates time_average_moments(const SamplePath& path, int opinion,
                                     double burn_in, double t_end, int batches) {
    if (!(burn_in >= 0.0) || !(t_end > burn_in) || t_end > path.t_end + 1e-12)
        throw WindowTooShort("time_average_moments: need 0 <= burn_in < t_end <= path end");
    if (batches < 2) throw ValidationError("time_average_moments: need >= 2 batches");

    const int n = static_cast<int>(path.initial.size());
    const StepFunction sf = count_steps(path, opinion);

    const double span = t_end - burn_in;
    std::vector<double> batch_mean(batches), batch_m2(batches);
    int active = 0;
    for (int b = 0; b < batches; ++b) {
        const double from = burn_in + span * b / batches;
        const double to = burn_in + span * (b + 1) / batches;
        const WindowSums w = integrate(sf, n, from, to);
        batch_mean[b] = w.ix / (to - from);
        batch_m2[b] = w.ixx / (to - from);
        if (w.jumps > 0) ++active;
    }

    double mean = 0.0, m2 = 0.0;
    for (int b = 0; b < batches; ++b) {
        mean += batch_mean[b];
        m2 += batch_m2[b];
    }
    mean /= batches;
    m2 /= batches;
    const double variance = std::max(0.0, m2 - mean * mean);

    MomentEstimates est;
    est.mean = {mean, 0.0, batches};
    est.variance = {variance, 0.0, batches};
    if (variance == 0.0 && active == 0) return est; // constant path

    if (active < 2)
        throw WindowTooShort("time_average_moments: fewer than 2 batches contain events");

    double sm = 0.0, sv = 0.0;
    for (int b = 0; b < batches; ++b) {
        const double dm = batch_mean[b] - mean;
        const double dv = (batch_m2[b] - batch_mean[b] * batch_mean[b]) - variance;
        sm += dm * dm;
        sv += dv * dv;
    }
    est.mean.std_error = std::sqrt(sm / (batches - 1.0) / batches);
    est.variance.std_error = std::sqrt(sv / (batches - 1.0) / batches);
    return est;
}

std::vector<BinEstimate> empirical_count_distribution(const Ensemble& ensemble,
                                                      int opinion,
                                                      double window_start,
                                                      double window_end) {
    if (ensemble.paths.empty())
        throw ValidationError("empirical distribution: empty ensemble");
    const int n = static_cast<int>(ensemble.paths.front().initial.size());
    const int reps = static_cast<int>(ensemble.paths.size());
    if (!(window_start >= 0.0) || !(window_end > window_start) ||
        window_end > ensemble.paths.front().t_end + 1e-12)
        throw WindowTooShort("empirical distribution: invalid window");

    // per-replication normalized occupancy histograms
    std::vector<std::vector<double>> hist(
        reps, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    for (int k = 0; k < reps; ++k) {
        const StepFunction sf = count_steps(ensemble.paths[k], opinion);
        for (std::size_t i = 0; i < sf.times.size(); ++i) {
            const double seg_start = std::max(sf.times[i], window_start);
            const double seg_end = std::min(
                i + 1 < sf.times.size() ? sf.times[i + 1] : window_end, window_end);
            if (seg_end > seg_start) hist[k][sf.counts[i]] += seg_end - seg_start;
        }
        const double total = window_end - window_start;
        for (double& h : hist[k]) h /= total;
    }

    std::vector<BinEstimate> out(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        double mean = 0.0;
        for (int k = 0; k < reps; ++k) mean += hist[k][i];
        mean /= reps;
        double var = 0.0;
        if (reps > 1) {
            for (int k = 0; k < reps; ++k) {
                const double d = hist[k][i] - mean;
                var += d * d;
            }
            var /= (reps - 1.0);
        }
        out[i] = {mean, std::sqrt(var / reps)};
    }
    return out;
}

} // namespace opinet
