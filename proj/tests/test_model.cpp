#include <doctest.h>

#include "opinet/model.hpp"
#include "opinet/uniformization.hpp"
#include "test_util.hpp"

using namespace opinet;
using Defect = RateMatrixValidation::Defect;

TEST_CASE("rate matrix validation") {
    Eigen::MatrixXd q(2, 2);

    SUBCASE("symmetric two-state chain is valid") {
        q << -1, 1, 1, -1;
        CHECK(validate_rate_matrix(q).ok());
    }
    SUBCASE("zero matrix is reducible") {
        q << 0, 0, 0, 0;
        CHECK(validate_rate_matrix(q).defect == Defect::Reducible);
    }
    SUBCASE("negative off-diagonal is reported with indices") {
        q << -1, 1, -0.5, 0.5;
        auto v = validate_rate_matrix(q);
        CHECK(v.defect == Defect::NegativeOffDiagonal);
        CHECK(v.row == 1);
        CHECK(v.col == 0);
    }
    SUBCASE("nonzero row sum is rejected") {
        q << -1, 1.5, 1, -1;
        auto v = validate_rate_matrix(q);
        CHECK(v.defect == Defect::RowSumNonzero);
        CHECK(v.row == 0);
    }
    SUBCASE("one-way chain is reducible") {
        Eigen::MatrixXd q3(3, 3);
        q3 << -1, 1, 0, 0, -1, 1, 0, 0, 0;
        CHECK(validate_rate_matrix(q3).defect == Defect::Reducible);
    }
}

TEST_CASE("stand-alone stationary distribution") {
    SUBCASE("symmetric chain") {
        auto pi = stand_alone_stationary(RateMatrix::two_state(1, 1));
        CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("asymmetric chain") {
        auto pi = stand_alone_stationary(RateMatrix::two_state(1, 3));
        CHECK(pi(0) == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(pi(1) == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("random 4x4 chain agrees with the long-horizon uniformization limit") {
        auto rng = make_rng(101);
        Eigen::MatrixXd q = testutil::random_rate_matrix(rng, 4);
        RateMatrix rm(q);
        auto pi = stand_alone_stationary(rm);
        CHECK(pi.minCoeff() > 0.0);
        CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((pi.transpose() * q).cwiseAbs().maxCoeff() < 1e-10);

        // independent oracle: run the chain far past its mixing time
        SparseGenerator gen = q.sparseView();
        const std::array<double, 1> horizon{200.0};
        auto traj = uniformized_transient(gen, Eigen::Vector4d(1, 0, 0, 0), horizon);
        CHECK((traj.distributions[0] - pi).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("scale covariance") {
        auto rng = make_rng(7);
        Eigen::MatrixXd q = testutil::random_rate_matrix(rng, 3);
        auto a = stand_alone_stationary(RateMatrix(q));
        auto b = stand_alone_stationary(RateMatrix(3.7 * q));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("left null property holds over random draws") {
        auto rng = make_rng(55);
        for (int rep = 0; rep < 20; ++rep) {
            int m = 2 + static_cast<int>(rng() % 5);
            Eigen::MatrixXd q = testutil::random_rate_matrix(rng, m);
            auto pi = stand_alone_stationary(RateMatrix(q));
            CHECK((pi.transpose() * q).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("stand-alone variance") {
    CHECK(stand_alone_variance(RateMatrix::two_state(1, 1)) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(stand_alone_variance(RateMatrix::two_state(1, 3)) ==
          doctest::Approx(0.1875).epsilon(1e-12));
    CHECK(stand_alone_variance(RateMatrix::two_state(0.1, 0.1)) ==
          doctest::Approx(0.25).epsilon(1e-12));

    auto rng = make_rng(3);
    Eigen::MatrixXd q3 = testutil::random_rate_matrix(rng, 3);
    CHECK_THROWS_AS(stand_alone_variance(RateMatrix(q3)), ValidationError);
}

TEST_CASE("influence intensities") {
    CHECK(InfluenceIntensities::uniform(2, 3.0).unbiased());
    CHECK_FALSE(InfluenceIntensities(Eigen::Vector2d(1.0, 2.0)).unbiased());
    CHECK_THROWS_AS(InfluenceIntensities(Eigen::Vector2d(1.0, -0.5)),
                    ValidationError);
}

TEST_CASE("intensity schedule lookup is right-continuous") {
    std::vector<InfluenceIntensities> segs{
        InfluenceIntensities(Eigen::Vector2d(0, 0)),
        InfluenceIntensities(Eigen::Vector2d(20, 0)),
        InfluenceIntensities(Eigen::Vector2d(20, 20)),
    };
    IntensitySchedule sched({1.0, 4.0}, segs);
    CHECK(sched.at(0.0)[0] == 0.0);
    CHECK(sched.at(0.999)[0] == 0.0);
    CHECK(sched.at(1.0)[0] == 20.0); // new segment exactly at the breakpoint
    CHECK(sched.at(3.9)[1] == 0.0);
    CHECK(sched.at(4.0)[1] == 20.0);
    CHECK(sched.at(100.0)[1] == 20.0);

    CHECK_THROWS_AS(IntensitySchedule({2.0, 1.0}, segs), ValidationError);
}

TEST_CASE("graph invariants") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), ValidationError);

    Graph g(4, {{0, 1}, {2, 1}, {0, 3}});
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(1) == 2);
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});

    auto round = Graph::from_edge_list(g.to_edge_list());
    CHECK(round.edges() == g.edges());
    CHECK(round.node_count() == 4);
}

TEST_CASE("network model checks") {
    Graph g(3, {{0, 1}, {1, 2}});
    auto q = RateMatrix::two_state(1, 1);
    IntensitySchedule sched(InfluenceIntensities::uniform(2, 1.0));
    NetworkModel net(g, q, sched);
    CHECK(net.identical_agents());
    CHECK(net.opinion_count() == 2);

    std::vector<RateMatrix> mixed{q, q, RateMatrix::two_state(1, 2)};
    NetworkModel het(g, mixed, sched);
    CHECK_FALSE(het.identical_agents());

    CHECK_THROWS_AS(NetworkModel(g, {q, q}, sched), ValidationError);
}
