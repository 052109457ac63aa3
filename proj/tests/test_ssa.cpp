#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "opinet/lumped.hpp"
#include "opinet/ssa.hpp"
#include "opinet/topology.hpp"
#include "test_util.hpp"

using namespace opinet;

namespace {

NetworkModel complete_net(int n, double q12, double q21, double l1, double l2) {
    TopologySpec spec{TopologySpec::Kind::Complete, n};
    return NetworkModel(generate_topology(spec), RateMatrix::two_state(q12, q21),
                        IntensitySchedule(InfluenceIntensities(
                            Eigen::Vector2d(l1, l2))));
}

// Walk the path event-by-event and re-derive every jump against rates
// recomputed from scratch.
void check_path_consistency(const NetworkModel& net, const SamplePath& path) {
    std::vector<int> state = path.initial;
    double prev_t = 0.0;
    for (const auto& ev : path.events) {
        CHECK(ev.t >= prev_t);
        CHECK(ev.t <= path.t_end);
        CHECK(ev.from == state[ev.agent]);
        CHECK(ev.from != ev.to);
        Eigen::MatrixXd rates = instantaneous_rates(net, state, ev.t);
        CHECK(rates(ev.agent, ev.to) > 0.0);
        state[ev.agent] = ev.to;
        prev_t = ev.t;
    }
}

} // namespace

TEST_CASE("initial sampling") {
    auto fixed = sample_initial(InitFixed{{0, 1, 0}}, 3, 2, 1);
    CHECK(fixed == std::vector<int>{0, 1, 0});
    auto all = sample_initial(InitAll{1}, 4, 2, 1);
    CHECK(all == std::vector<int>{1, 1, 1, 1});

    Eigen::VectorXd pi0(2);
    pi0 << 0.25, 0.75;
    auto iid = sample_initial(InitIid{pi0}, 4000, 2, 99);
    double frac = std::count(iid.begin(), iid.end(), 0) / 4000.0;
    CHECK(frac == doctest::Approx(0.25).epsilon(0.1));
    CHECK(sample_initial(InitIid{pi0}, 4000, 2, 99) == iid);

    CHECK_THROWS_AS(sample_initial(InitFixed{{0, 2}}, 2, 2, 1), ValidationError);
    CHECK_THROWS_AS(sample_initial(InitAll{2}, 2, 2, 1), ValidationError);
}

TEST_CASE("single path simulation") {
    SUBCASE("determinism: same seed, same path") {
        auto net = complete_net(10, 1, 1, 5, 5);
        std::vector<int> sigma0(10, 0);
        auto a = simulate_path(net, sigma0, 20.0, 4242);
        auto b = simulate_path(net, sigma0, 20.0, 4242);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].t == b.events[i].t);
            CHECK(a.events[i].agent == b.events[i].agent);
            CHECK(a.events[i].to == b.events[i].to);
        }
        auto c = simulate_path(net, sigma0, 20.0, 4243);
        CHECK(a.events.size() != c.events.size());
    }
    SUBCASE("every event is feasible under recomputed rates") {
        auto rng = make_rng(5);
        Graph g = testutil::random_connected_graph(rng, 12, 6);
        NetworkModel net(g, RateMatrix::two_state(0.7, 1.4),
                         IntensitySchedule(InfluenceIntensities(
                             Eigen::Vector2d(6.0, 2.0))));
        std::vector<int> sigma0 = sample_initial(InitAll{1}, 12, 2, 0);
        auto path = simulate_path(net, sigma0, 30.0, 17);
        CHECK(path.events.size() > 100);
        check_path_consistency(net, path);
    }
    SUBCASE("opinion_at replays the event log") {
        auto net = complete_net(5, 1, 1, 3, 3);
        std::vector<int> sigma0{0, 1, 0, 1, 1};
        auto path = simulate_path(net, sigma0, 10.0, 7);
        for (int r = 0; r < 5; ++r) CHECK(path.opinion_at(r, 0.0) == sigma0[r]);
        std::vector<int> state = sigma0;
        for (const auto& ev : path.events) {
            state[ev.agent] = ev.to;
            CHECK(path.opinion_at(ev.agent, ev.t) == ev.to);
        }
        for (int r = 0; r < 5; ++r)
            CHECK(path.opinion_at(r, path.t_end) == state[r]);
    }
    SUBCASE("single agent occupancy matches the two-state chain") {
        TopologySpec spec{TopologySpec::Kind::Empty, 1};
        NetworkModel net(generate_topology(spec), RateMatrix::two_state(1, 3),
                         IntensitySchedule(InfluenceIntensities::uniform(2, 0)));
        // long-run fraction of time in opinion 1 should approach 0.75
        auto path = simulate_path(net, {1}, 4000.0, 23);
        double occ = 0.0;
        double prev = 0.0;
        int cur = 1;
        for (const auto& ev : path.events) {
            if (cur == 0) occ += ev.t - prev;
            prev = ev.t;
            cur = ev.to;
        }
        if (cur == 0) occ += path.t_end - prev;
        CHECK(occ / path.t_end == doctest::Approx(0.75).epsilon(0.03));
    }
    SUBCASE("non-positive horizon is rejected") {
        auto net = complete_net(3, 1, 1, 0, 0);
        CHECK_THROWS_AS(simulate_path(net, {0, 1, 0}, 0.0, 3), ValidationError);
    }
}

TEST_CASE("piecewise-constant intensity schedules") {
    std::vector<InfluenceIntensities> segs{
        InfluenceIntensities(Eigen::Vector2d(0, 0)),
        InfluenceIntensities(Eigen::Vector2d(40, 0)),
    };
    IntensitySchedule sched({2.0}, segs);
    TopologySpec spec{TopologySpec::Kind::Complete, 12};
    NetworkModel net(generate_topology(spec), RateMatrix::two_state(1, 1), sched);

    SUBCASE("rates switch exactly at the breakpoint") {
        std::vector<int> state{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
        Eigen::MatrixXd before = instantaneous_rates(net, state, 1.99);
        Eigen::MatrixXd at = instantaneous_rates(net, state, 2.0);
        // agent 1 holds opinion 2 with 6 of 11 neighbours at opinion 1
        CHECK(before(1, 0) == doctest::Approx(1.0));
        CHECK(at(1, 0) == doctest::Approx(1.0 + 40.0 * 6 / 11));
    }
    SUBCASE("ensemble counts track the lumped transient through the switch") {
        const int n = 12, reps = 400;
        Eigen::VectorXd pi0(2);
        pi0 << 0.5, 0.5;
        auto ensemble = run_ensemble(net, InitIid{pi0}, 6.0, reps, 2025);
        const std::array<double, 3> grid{1.5, 2.5, 6.0};
        Eigen::VectorXd p0 =
            initial_count_distribution(InitialCountKind::Binomial, n);
        auto exact = pa_transient_schedule(n, 1, 1, sched, p0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double exact_mean = 0.0;
            for (int j = 0; j <= n; ++j)
                exact_mean += j * exact.distributions[i](j);
            double sim_mean = 0.0;
            for (const auto& path : ensemble.paths)
                sim_mean += path_counts(path, 0, {&grid[i], 1})[0];
            sim_mean /= reps;
            // generous ~4 sigma band for the replication mean
            CHECK(std::abs(sim_mean - exact_mean) < 0.6);
        }
    }
}

TEST_CASE("ensembles") {
    auto net = complete_net(6, 1, 1, 4, 4);
    Eigen::VectorXd pi0(2);
    pi0 << 0.5, 0.5;

    SUBCASE("independent of thread count") {
        auto serial = run_ensemble(net, InitIid{pi0}, 5.0, 12, 77, 1);
        auto parallel = run_ensemble(net, InitIid{pi0}, 5.0, 12, 77, 4);
        REQUIRE(serial.paths.size() == parallel.paths.size());
        for (std::size_t k = 0; k < serial.paths.size(); ++k) {
            CHECK(serial.paths[k].initial == parallel.paths[k].initial);
            REQUIRE(serial.paths[k].events.size() ==
                    parallel.paths[k].events.size());
            for (std::size_t i = 0; i < serial.paths[k].events.size(); ++i)
                CHECK(serial.paths[k].events[i].t ==
                      parallel.paths[k].events[i].t);
        }
    }
    SUBCASE("replications differ from each other") {
        auto ens = run_ensemble(net, InitAll{0}, 5.0, 4, 3);
        CHECK(ens.paths[0].events.size() != ens.paths[1].events.size());
    }
    SUBCASE("path_counts partitions the agents") {
        auto ens = run_ensemble(net, InitIid{pi0}, 5.0, 3, 11);
        auto grid = testutil::linspace(0.0, 5.0, 11);
        for (const auto& path : ens.paths) {
            auto n1 = path_counts(path, 0, grid);
            auto n2 = path_counts(path, 1, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                CHECK(n1[i] + n2[i] == 6);
        }
    }
}

TEST_CASE("strong herding produces long consensus dwells") {
    // N=20 with lambda = 200: the population should spend nearly all its
    // time at one of the unanimous states.
    auto net = complete_net(20, 1, 1, 200, 200);
    std::vector<int> sigma0(20, 0);
    auto path = simulate_path(net, sigma0, 200.0, 8);
    double consensus_time = 0.0;
    std::vector<int> state = sigma0;
    double prev = 0.0;
    auto count0 = [&] { return std::count(state.begin(), state.end(), 0); };
    for (const auto& ev : path.events) {
        long c = count0();
        if (c == 0 || c == 20) consensus_time += ev.t - prev;
        state[ev.agent] = ev.to;
        prev = ev.t;
    }
    {
        long c = count0();
        if (c == 0 || c == 20) consensus_time += path.t_end - prev;
    }
    CHECK(consensus_time / path.t_end > 0.6);
}
