#include "opinet/ssa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "opinet/rng.hpp"

namespace opinet {

int SamplePath::opinion_at(int r, double t) const {
    int op = initial[r];
    for (const auto& ev : events) {
        if (ev.t > t) break;
        if (ev.agent == r) op = ev.to;
    }
    return op;
}

std::vector<int> sample_initial(const InitSpec& spec, int n, int opinion_count,
                                std::uint64_t seed) {
    std::vector<int> sigma(n);
    if (const auto* iid = std::get_if<InitIid>(&spec)) {
        if (iid->pi0.size() != opinion_count ||
            !is_probability_vector(iid->pi0, 1e-9))
            throw ValidationError("initial opinions: pi0 is not a distribution over the opinions");
        Rng rng = make_rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int r = 0; r < n; ++r) {
            double u = unit(rng);
            int op = opinion_count - 1;
            double cum = 0.0;
            for (int j = 0; j < opinion_count; ++j) {
                cum += iid->pi0(j);
                if (u < cum) { op = j; break; }
            }
            sigma[r] = op;
        }
    } else if (const auto* fixed = std::get_if<InitFixed>(&spec)) {
        if (static_cast<int>(fixed->opinions.size()) != n)
            throw ValidationError("initial opinions: fixed assignment has wrong length");
        sigma = fixed->opinions;
    } else {
        const auto& all = std::get<InitAll>(spec);
        std::fill(sigma.begin(), sigma.end(), all.opinion);
    }
    for (int op : sigma)
        if (op < 0 || op >= opinion_count)
            throw ValidationError("initial opinions: opinion index out of range");
    return sigma;
}

namespace {

// Flat per-agent-per-target rate table with incrementally maintained totals.
class RateTable {
  public:
    RateTable(const NetworkModel& network, const std::vector<int>& sigma)
        : network_(network), n_(network.agent_count()), m_(network.opinion_count()),
          sigma_(sigma), counts_(static_cast<std::size_t>(n_) * m_, 0),
          rates_(static_cast<std::size_t>(n_) * m_, 0.0), agent_total_(n_, 0.0) {
        for (int r = 0; r < n_; ++r)
            for (int nb : network_.graph().neighbors(r)) ++counts_[idx(r, sigma_[nb])];
    }

    void rebuild(const InfluenceIntensities& lam) {
        lam_ = &lam;
        total_ = 0.0;
        for (int r = 0; r < n_; ++r) {
            refresh_agent(r);
            total_ += agent_total_[r];
        }
    }

    double total() const { return total_; }

    // Selects (agent, target) with probability proportional to its rate.
    std::pair<int, int> select(double u) const {
        double x = u * total_;
        int r = 0;
        for (; r < n_ - 1; ++r) {
            if (x < agent_total_[r]) break;
            x -= agent_total_[r];
        }
        // clamp into the chosen agent's row to absorb roundoff
        int last = -1;
        for (int j = 0; j < m_; ++j) {
            const double rate = rates_[idx(r, j)];
            if (rate <= 0.0) continue;
            last = j;
            if (x < rate) return {r, j};
            x -= rate;
        }
        if (last >= 0) return {r, last};
        // roundoff drift picked an inert agent; fall back to a global scan
        for (int a = 0; a < n_; ++a)
            for (int j = 0; j < m_; ++j)
                if (rates_[idx(a, j)] > 0.0) return {a, j};
        throw ValidationError("ssa: event selection with zero total rate");
    }

    // Applies the jump of `agent` to opinion `to`, updating neighbour counts
    // and only the affected rate entries.
    void apply(int agent, int to) {
        const int from = sigma_[agent];
        sigma_[agent] = to;
        refresh_agent(agent);
        for (int nb : network_.graph().neighbors(agent)) {
            --counts_[idx(nb, from)];
            ++counts_[idx(nb, to)];
            refresh_entry(nb, from);
            refresh_entry(nb, to);
        }
        recompute_total();
    }

    const std::vector<int>& opinions() const { return sigma_; }

  private:
    std::size_t idx(int r, int j) const {
        return static_cast<std::size_t>(r) * m_ + j;
    }

    double rate_of(int r, int j) const {
        const int i = sigma_[r];
        if (j == i) return 0.0;
        double rate = network_.agent(r).rate(i, j);
        const int deg = network_.graph().degree(r);
        if (deg > 0) rate += (*lam_)[j] * counts_[idx(r, j)] / deg;
        return rate;
    }

    void refresh_entry(int r, int j) {
        const std::size_t k = idx(r, j);
        const double fresh = rate_of(r, j);
        agent_total_[r] += fresh - rates_[k];
        rates_[k] = fresh;
    }

    void refresh_agent(int r) {
        double sum = 0.0;
        for (int j = 0; j < m_; ++j) {
            const double rate = rate_of(r, j);
            rates_[idx(r, j)] = rate;
            sum += rate;
        }
        agent_total_[r] = sum;
    }

    void recompute_total() {
        total_ = 0.0;
        for (double s : agent_total_) total_ += s;
        if (!std::isfinite(total_))
            throw ValidationError("ssa: nonfinite total rate");
    }

    const NetworkModel& network_;
    int n_, m_;
    std::vector<int> sigma_;
    std::vector<int> counts_;
    std::vector<double> rates_;
    std::vector<double> agent_total_;
    double total_ = 0.0;
    const InfluenceIntensities* lam_ = nullptr;
};

} // namespace

SamplePath simulate_path(const NetworkModel& network,
                         const std::vector<int>& sigma0, double t_end,
                         std::uint64_t seed) {
    if (!(t_end > 0.0)) throw ValidationError("ssa: t_end must be positive");
    if (static_cast<int>(sigma0.size()) != network.agent_count())
        throw ValidationError("ssa: initial opinions have wrong length");
    for (int op : sigma0)
        if (op < 0 || op >= network.opinion_count())
            throw ValidationError("ssa: initial opinion out of range");

    SamplePath path;
    path.initial = sigma0;
    path.t_end = t_end;
    path.seed = seed;

    RateTable table(network, sigma0);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const IntensitySchedule& schedule = network.schedule();

    double t = 0.0;
    std::size_t seg = schedule.segment_index(0.0);
    table.rebuild(schedule.segment(seg));
    double seg_end = schedule.segment_end(seg, t_end);
    std::size_t events_since_rebuild = 0;

    while (t < t_end) {
        const double total = table.total();
        if (total <= 0.0) { // frozen: jump to the next schedule change
            t = seg_end;
        } else {
            const double wait = -std::log1p(-unit(rng)) / total;
            if (t + wait > seg_end) {
                t = seg_end; // memorylessness: restart the clock in the new segment
            } else {
                t += wait;
                auto [agent, to] = table.select(unit(rng));
                path.events.push_back({t, agent, table.opinions()[agent], to});
                table.apply(agent, to);
                if (++events_since_rebuild >= 65536) {
                    table.rebuild(schedule.segment(seg)); // curb roundoff drift
                    events_since_rebuild = 0;
                }
            }
        }
        if (t >= seg_end && t < t_end) {
            ++seg;
            table.rebuild(schedule.segment(seg));
            seg_end = schedule.segment_end(seg, t_end);
            events_since_rebuild = 0;
        }
    }
    return path;
}

Ensemble run_ensemble(const NetworkModel& network, const InitSpec& init,
                      double t_end, int replications, std::uint64_t master_seed,
                      int threads) {
    if (replications < 1) throw ValidationError("ensemble: need at least one replication");
    Ensemble ensemble;
    ensemble.master_seed = master_seed;
    ensemble.paths.resize(replications);

    auto worker = [&](int k) {
        const std::uint64_t path_seed = derive_seed(master_seed, 2 * k);
        const std::uint64_t init_seed = derive_seed(master_seed, 2 * k + 1);
        auto sigma0 = sample_initial(init, network.agent_count(),
                                     network.opinion_count(), init_seed);
        ensemble.paths[k] = simulate_path(network, sigma0, t_end, path_seed);
    };

    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, replications));
    if (threads == 1) {
        for (int k = 0; k < replications; ++k) worker(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < replications; k = next.fetch_add(1))
                    worker(k);
            });
        for (auto& th : pool) th.join();
    }
    return ensemble;
}

std::vector<int> path_counts(const SamplePath& path, int opinion,
                             std::span<const double> grid) {
    std::vector<int> out;
    out.reserve(grid.size());
    int count = 0;
    for (int op : path.initial)
        if (op == opinion) ++count;
    std::size_t e = 0;
    double prev = -1.0;
    for (double t : grid) {
        if (t < 0.0 || t > path.t_end || t < prev)
            throw ValidationError("path_counts: grid point outside the path window");
        prev = t;
        for (; e < path.events.size() && path.events[e].t <= t; ++e) {
            if (path.events[e].from == opinion) --count;
            if (path.events[e].to == opinion) ++count;
        }
        out.push_back(count);
    }
    return out;
}

Eigen::MatrixXd instantaneous_rates(const NetworkModel& network,
                                    const std::vector<int>& opinions, double t) {
    const int n = network.agent_count();
    const int m = network.opinion_count();
    const auto& lam = network.schedule().at(t);
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n, m);
    for (int r = 0; r < n; ++r) {
        const int i = opinions[r];
        std::vector<int> counts(m, 0);
        for (int nb : network.graph().neighbors(r)) ++counts[opinions[nb]];
        const int deg = network.graph().degree(r);
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            double rate = network.agent(r).rate(i, j);
            if (deg > 0) rate += lam[j] * counts[j] / deg;
            rates(r, j) = rate;
        }
    }
    return rates;
}

} // namespace opinet
