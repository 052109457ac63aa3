#include "runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opinet/csv.hpp"
#include "opinet/errors.hpp"
#include "opinet/lumped.hpp"
#include "opinet/marginal.hpp"
#include "opinet/master.hpp"
#include "opinet/rng.hpp"
#include "opinet/ssa.hpp"
#include "opinet/stats.hpp"

namespace opinet::cli {

namespace {

std::vector<double> time_grid(double t_end, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = t_end * i / (points - 1.0);
    return g;
}

/// CSV text -> array of row objects keyed by the header columns.
nlohmann::ordered_json csv_to_json(const std::string& csv) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream in(line);
        std::string cell;
        while (std::getline(in, cell, ',')) cells.push_back(cell);
        return cells;
    };
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    const std::vector<std::string> header = split(line);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        nlohmann::ordered_json row;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
            try {
                std::size_t used = 0;
                double v = std::stod(cells[i], &used);
                if (used == cells[i].size()) {
                    row[header[i]] = v;
                    continue;
                }
            } catch (const std::exception&) {
            }
            row[header[i]] = cells[i];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

class Emitter {
  public:
    Emitter(std::filesystem::path dir, std::string format)
        : dir_(std::move(dir)), format_(std::move(format)) {}

    /// Writes one artifact in the configured format and records it.
    void table(const std::string& name, const std::string& schema,
               const std::string& csv) {
        const bool json = format_ == "json";
        const std::string file = name + (json ? ".json" : ".csv");
        write(file, json ? csv_to_json(csv).dump(2) + "\n" : csv);
        artifacts_.push_back({file, schema});
    }

    void write(const std::string& file, const std::string& content) {
        std::ofstream os(dir_ / file, std::ios::binary);
        if (!os) throw IoError("cannot write " + (dir_ / file).string());
        os << content;
        if (!os) throw IoError("write failed for " + (dir_ / file).string());
    }

    const std::vector<Artifact>& artifacts() const { return artifacts_; }

  private:
    std::filesystem::path dir_;
    std::string format_;
    std::vector<Artifact> artifacts_;
};

struct PaParams {
    int n;
    double q12;
    double q21;
};

/// Extracts (N, q12, q21) and checks the graph is complete with two
/// opinions, as the count-chain solvers require.
PaParams require_pa(const ExperimentConfig& cfg, const std::string& solver) {
    if (cfg.model.opinions != 2)
        throw ValidationError("[run] solver: " + solver +
                              " requires exactly 2 opinions");
    const Graph g = config_graph(cfg);
    const int n = g.node_count();
    if (n < 2 || g.edge_count() != static_cast<std::size_t>(n) * (n - 1) / 2)
        throw ValidationError("[run] solver: " + solver +
                              " requires a complete graph with N >= 2");
    const Eigen::MatrixXd q = config_rate_matrix(cfg).matrix();
    return {n, q(0, 1), q(1, 0)};
}

/// Initial distribution of the opinion-1 count for the count-chain solvers.
Eigen::VectorXd initial_counts(const ExperimentConfig& cfg, const PaParams& pa) {
    const auto& run = cfg.run;
    if (run.init == "binomial" || run.init == "iid")
        return initial_count_distribution(InitialCountKind::Binomial, pa.n,
                                          run.init_p);
    if (run.init == "uniform")
        return initial_count_distribution(InitialCountKind::Uniform, pa.n);
    if (run.init == "deterministic")
        return initial_count_distribution(InitialCountKind::Deterministic, pa.n,
                                          0.5, run.init_value);
    if (run.init == "all") {
        const int count = (run.init_value == 1) ? pa.n : 0;
        return initial_count_distribution(InitialCountKind::Deterministic, pa.n,
                                          0.5, count);
    }
    // stationary: steady state of the schedule's first segment
    const auto seg = config_schedule(cfg).segment(0);
    return pa_steady_state(build_pa_chain(pa.n, pa.q12, pa.q21, seg[0], seg[1]));
}

double default_burn_in(const ExperimentConfig& cfg) {
    if (cfg.run.burn_in >= 0.0) return cfg.run.burn_in;
    const Eigen::MatrixXd q = config_rate_matrix(cfg).matrix();
    if (cfg.model.opinions == 2) return 10.0 / (q(0, 1) + q(1, 0));
    return 10.0 / q.diagonal().cwiseAbs().minCoeff();
}

std::string moments_csv(const std::vector<std::array<double, 4>>& rows) {
    std::ostringstream os;
    csv::moment_sweep_header(os);
    for (const auto& r : rows) csv::moment_sweep_row(os, r[0], r[1], r[2], r[3]);
    return os.str();
}

void run_lumped(const ExperimentConfig& cfg, Emitter& out) {
    const PaParams pa = require_pa(cfg, "lumped");
    const IntensitySchedule sched = config_schedule(cfg);

    if (!cfg.influence.sweep.empty()) {
        std::vector<std::array<double, 4>> rows;
        for (const auto& lam : cfg.influence.sweep) {
            auto pbar = pa_steady_state(
                build_pa_chain(pa.n, pa.q12, pa.q21, lam[0], lam[1]));
            auto m = pa_moments(pbar);
            rows.push_back({lam[0], lam[1], m.mean, m.variance});
        }
        out.table("moments", "lambda1,lambda2,mean,var", moments_csv(rows));
    }

    // stationary distribution under the last schedule segment
    const auto last = sched.segment(sched.segment_count() - 1);
    auto pbar =
        pa_steady_state(build_pa_chain(pa.n, pa.q12, pa.q21, last[0], last[1]));
    {
        std::ostringstream os;
        csv::count_distribution(os, pbar);
        out.table("distribution", "i,p", os.str());
    }
    {
        auto m = pa_moments(pbar);
        std::ostringstream os;
        csv::statistics_header(os);
        csv::statistics_row(os, "mean", {m.mean, 0.0, 0});
        csv::statistics_row(os, "variance", {m.variance, 0.0, 0});
        out.table("statistics", "statistic,value,std_error,n", os.str());
    }

    if (cfg.run.t_end > 0 && cfg.run.grid_points >= 2) {
        auto grid = time_grid(cfg.run.t_end, cfg.run.grid_points);
        auto traj = pa_transient_schedule(pa.n, pa.q12, pa.q21, sched,
                                          initial_counts(cfg, pa), grid);
        std::ostringstream counts, theory;
        csv::count_transient(counts, traj);
        csv::theory_curve(theory, traj, pa.n, &pa_percentile);
        out.table("counts", "t,i,p", counts.str());
        out.table("theory", "t,mean,p2.5,p97.5", theory.str());
    }
}

void run_master(const ExperimentConfig& cfg, Emitter& out) {
    const NetworkModel net = config_network(cfg);
    const int n = net.agent_count();
    MasterStateSpace space(n, net.opinion_count());

    if (net.schedule().segment_count() == 1) {
        auto bar = master_steady_state(build_master_generator(net));
        auto counts = count_distribution(bar, space, 0);
        std::ostringstream os;
        csv::count_distribution(os, counts);
        out.table("distribution", "i,p", os.str());

        double mean = 0.0, m2 = 0.0;
        for (int i = 0; i <= n; ++i) {
            mean += counts(i) * i / n;
            m2 += counts(i) * i / n * i / n;
        }
        std::ostringstream stats;
        csv::statistics_header(stats);
        csv::statistics_row(stats, "mean", {mean, 0.0, 0});
        csv::statistics_row(stats, "variance", {m2 - mean * mean, 0.0, 0});
        out.table("statistics", "statistic,value,std_error,n", stats.str());
    }

    if (cfg.run.t_end > 0 && cfg.run.grid_points >= 2) {
        if (net.schedule().segment_count() != 1)
            throw ValidationError(
                "[influence] breakpoints: the master transient supports a "
                "single segment only");
        // product initial distribution over agents
        const int m = net.opinion_count();
        Eigen::VectorXd row(m);
        if (cfg.run.init == "all") {
            row.setZero();
            if (cfg.run.init_value < 1 || cfg.run.init_value > m)
                throw ValidationError("[run] init_value: opinion out of range");
            row(cfg.run.init_value - 1) = 1.0;
        } else if (m == 2) {
            row << cfg.run.init_p, 1.0 - cfg.run.init_p;
        } else {
            row.setConstant(1.0 / m);
        }
        Eigen::VectorXd pi0(space.state_count());
        for (std::int64_t s = 0; s < space.state_count(); ++s) {
            double prob = 1.0;
            for (int r = 0; r < n; ++r) prob *= row(space.opinion_of(s, r));
            pi0(s) = prob;
        }
        auto grid = time_grid(cfg.run.t_end, cfg.run.grid_points);
        auto traj = master_transient(build_master_generator(net), pi0, grid);
        ProbabilityTrajectory counts;
        counts.times = traj.times;
        for (const auto& p : traj.distributions)
            counts.distributions.push_back(count_distribution(p, space, 0));
        std::ostringstream os;
        csv::count_transient(os, counts);
        out.table("counts", "t,i,p", os.str());
    }
}

void run_marginal(const ExperimentConfig& cfg, Emitter& out) {
    const NetworkModel net = config_network(cfg);
    if (net.schedule().segment_count() != 1)
        throw ValidationError(
            "[influence] breakpoints: the marginal solver supports a single "
            "segment only");
    const auto lam = net.schedule().segment(0);
    for (int j = 1; j < lam.opinion_count(); ++j)
        if (lam[j] != lam[0])
            throw ValidationError(
                "[influence] lambda: the marginal solver requires unbiased "
                "intensities");
    if (cfg.run.t_end <= 0 || cfg.run.grid_points < 2)
        throw ValidationError("[run] t_end/grid: the marginal solver needs a "
                              "positive horizon and >= 2 grid points");

    const int n = net.agent_count();
    const int m = net.opinion_count();
    MarginalField init(n, m);
    if (cfg.run.init == "all") {
        if (cfg.run.init_value < 1 || cfg.run.init_value > m)
            throw ValidationError("[run] init_value: opinion out of range");
        init.setZero();
        init.col(cfg.run.init_value - 1).setOnes();
    } else if (m == 2) {
        init.col(0).setConstant(cfg.run.init_p);
        init.col(1).setConstant(1.0 - cfg.run.init_p);
    } else {
        init.setConstant(1.0 / m);
    }
    auto grid = time_grid(cfg.run.t_end, cfg.run.grid_points);
    auto traj = marginal_ode_solve(net, lam[0], init, grid);
    std::ostringstream os;
    csv::marginal_trajectory(os, traj);
    out.table("marginals", "t,agent,opinion,prob", os.str());
}

void run_pair(const ExperimentConfig& cfg, Emitter& out) {
    const PaParams pa = require_pa(cfg, "pair");
    const IntensitySchedule sched = config_schedule(cfg);
    if (sched.segment_count() != 1)
        throw ValidationError("[influence] breakpoints: the pair solver "
                              "supports a single segment only");
    const auto lam = sched.segment(0);
    if (lam[0] != lam[1])
        throw ValidationError(
            "[influence] lambda: the pair solver requires unbiased intensities");
    if (cfg.run.t_end <= 0 || cfg.run.grid_points < 2)
        throw ValidationError("[run] t_end/grid: the pair solver needs a "
                              "positive horizon and >= 2 grid points");

    PairJointState x0{};
    if (cfg.run.init == "all") {
        x0.pi11 = (cfg.run.init_value == 1) ? 1.0 : 0.0;
        x0.pi22 = 1.0 - x0.pi11;
    } else {
        x0.pi11 = cfg.run.init_p * cfg.run.init_p;
        x0.pi22 = (1.0 - cfg.run.init_p) * (1.0 - cfg.run.init_p);
    }
    auto grid = time_grid(cfg.run.t_end, cfg.run.grid_points);
    auto traj = pair_joint_ode_solve(pa.n, pa.q12, pa.q21, lam[0], x0, grid);
    std::ostringstream os;
    csv::pair_trajectory(os, traj);
    out.table("pair", "t,pi11,pi22,pi12", os.str());
}

InitSpec iid_init(const ExperimentConfig& cfg, int m) {
    if (m == 2) {
        Eigen::VectorXd pi(2);
        pi << cfg.run.init_p, 1.0 - cfg.run.init_p;
        return InitIid{pi};
    }
    return InitIid{Eigen::VectorXd::Constant(m, 1.0 / m)};
}

/// Replications whose initial configuration is drawn from a count
/// distribution (uniform / stationary): sample the count per replication,
/// then place that many agents at opinion 1.
Ensemble sampled_count_ensemble(const ExperimentConfig& cfg,
                                const NetworkModel& net,
                                const Eigen::VectorXd& count_dist) {
    Ensemble ens;
    ens.master_seed = cfg.run.seed;
    for (int k = 0; k < cfg.run.replications; ++k) {
        Rng rng = make_rng(derive_seed(cfg.run.seed, 0x10000u + k));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = std::clamp(unif(rng), 1e-12, 1.0 - 1e-12);
        const int count = pa_percentile(count_dist, u);
        std::vector<int> sigma0(net.agent_count(), 1);
        for (int r = 0; r < count; ++r) sigma0[r] = 0;
        ens.paths.push_back(
            simulate_path(net, sigma0, cfg.run.t_end, derive_seed(cfg.run.seed, 2 * k)));
    }
    return ens;
}

void run_ssa(const ExperimentConfig& cfg, Emitter& out) {
    const NetworkModel net = config_network(cfg);
    const int n = net.agent_count();
    const int m = net.opinion_count();
    if (cfg.run.t_end <= 0 || cfg.run.grid_points < 2)
        throw ValidationError("[run] t_end/grid: the ssa solver needs a "
                              "positive horizon and >= 2 grid points");

    Ensemble ens;
    if (cfg.run.init == "uniform" || cfg.run.init == "stationary") {
        const PaParams pa = require_pa(cfg, "ssa with a count-drawn initial "
                                            "condition");
        ens = sampled_count_ensemble(cfg, net, initial_counts(cfg, pa));
    } else {
        InitSpec init = iid_init(cfg, m);
        if (cfg.run.init == "all") {
            if (cfg.run.init_value < 1 || cfg.run.init_value > m)
                throw ValidationError("[run] init_value: opinion out of range");
            init = InitAll{cfg.run.init_value - 1};
        } else if (cfg.run.init == "deterministic") {
            if (cfg.run.init_value < 0 || cfg.run.init_value > n)
                throw ValidationError("[run] init_value: count out of range");
            std::vector<int> sigma0(n, 1);
            for (int r = 0; r < cfg.run.init_value; ++r) sigma0[r] = 0;
            init = InitFixed{sigma0};
        }
        ens = run_ensemble(net, init, cfg.run.t_end, cfg.run.replications,
                           cfg.run.seed, cfg.run.threads);
    }

    auto grid = time_grid(cfg.run.t_end, cfg.run.grid_points);
    {
        std::ostringstream os;
        csv::count_trajectories(os, ens, m, grid);
        out.table("trajectories", "t,replicate,n1..nM", os.str());
    }
    if (cfg.run.write_events) {
        std::ostringstream os;
        csv::event_log(os, ens.paths.front());
        out.table("events", "t,agent,from,to", os.str());
    }

    const double burn = default_burn_in(cfg);
    if (burn < cfg.run.t_end) {
        std::vector<MomentEstimates> reps;
        for (const auto& path : ens.paths)
            reps.push_back(time_average_moments(path, 0, burn, cfg.run.t_end,
                                                cfg.run.batches));
        auto combine = [&](auto pick) {
            Estimate est;
            const int r = static_cast<int>(reps.size());
            if (r == 1) return pick(reps[0]);
            double mean = 0.0;
            for (const auto& rep : reps) mean += pick(rep).value;
            mean /= r;
            double var = 0.0;
            for (const auto& rep : reps) {
                const double d = pick(rep).value - mean;
                var += d * d;
            }
            est.value = mean;
            est.std_error = std::sqrt(var / (r - 1.0) / r);
            est.sample_size = r;
            return est;
        };
        std::ostringstream os;
        csv::statistics_header(os);
        csv::statistics_row(os, "mean",
                            combine([](const MomentEstimates& e) { return e.mean; }));
        csv::statistics_row(
            os, "variance",
            combine([](const MomentEstimates& e) { return e.variance; }));
        out.table("statistics", "statistic,value,std_error,n", os.str());

        auto hist = empirical_count_distribution(ens, 0, burn, cfg.run.t_end);
        std::ostringstream hos;
        csv::histogram(hos, hist);
        out.table("histogram", "i,p,stderr", hos.str());
    }
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    Emitter out(out_dir, cfg.output.format);
    if (cfg.run.solver == "lumped") run_lumped(cfg, out);
    else if (cfg.run.solver == "master") run_master(cfg, out);
    else if (cfg.run.solver == "marginal") run_marginal(cfg, out);
    else if (cfg.run.solver == "pair") run_pair(cfg, out);
    else if (cfg.run.solver == "ssa") run_ssa(cfg, out);
    else throw ValidationError("[run] solver: unknown solver '" + cfg.run.solver + "'");

    // reproducibility: echo the resolved config and list the artifacts
    ExperimentConfig resolved = cfg;
    resolved.run.burn_in = default_burn_in(cfg);
    resolved.output.directory = out_dir.string();
    out.write("resolved.ini", to_ini(resolved));

    nlohmann::ordered_json manifest;
    manifest["solver"] = cfg.run.solver;
    manifest["seed"] = cfg.run.seed;
    manifest["format"] = cfg.output.format;
    manifest["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : out.artifacts())
        manifest["artifacts"].push_back({{"file", a.file}, {"schema", a.schema}});
    out.write("manifest.json", manifest.dump(2) + "\n");

    RunResult result;
    result.directory = out_dir;
    result.artifacts = out.artifacts();
    return result;
}

} // namespace opinet::cli
