#include <doctest.h>

#include <cmath>

#include "opinet/lumped.hpp"
#include "test_util.hpp"

using namespace opinet;

namespace {

// Independent binomial CDF oracle via log-gamma.
double binomial_cdf(int n, double p, int k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) {
        double logpmf = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                        std::lgamma(n - i + 1.0) + i * std::log(p) +
                        (n - i) * std::log1p(-p);
        acc += std::exp(logpmf);
    }
    return acc;
}

} // namespace

TEST_CASE("birth-death chain construction") {
    // N=3, q12=1, q21=2, lambda1=3, lambda2=4:
    //   mu_1 = (2 + 0) * 3 = 6        mu_2 = (2 + 3/2) * 2 = 7
    //   mu_3 = (2 + 3) * 1 = 5
    //   nu_0 = (1 + 4) * 1 = 5        nu_1 = (1 + 2) * 2 = 6
    //   nu_2 = (1 + 0) * 3 = 3
    auto chain = build_pa_chain(3, 1, 2, 3, 4);
    CHECK(chain.agent_count() == 3);
    CHECK(chain.birth_rate(1) == doctest::Approx(6).epsilon(1e-14));
    CHECK(chain.birth_rate(2) == doctest::Approx(7).epsilon(1e-14));
    CHECK(chain.birth_rate(3) == doctest::Approx(5).epsilon(1e-14));
    CHECK(chain.death_rate(0) == doctest::Approx(5).epsilon(1e-14));
    CHECK(chain.death_rate(1) == doctest::Approx(6).epsilon(1e-14));
    CHECK(chain.death_rate(2) == doctest::Approx(3).epsilon(1e-14));
    CHECK(chain.irreducible());

    SparseGenerator gen = chain.generator();
    Eigen::MatrixXd dense = gen;
    CHECK(dense.rows() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(dense.row(i).sum()) < 1e-12);
        for (int j = 0; j < 4; ++j)
            if (std::abs(i - j) > 1) CHECK(dense(i, j) == 0.0);
    }
    CHECK(dense(0, 1) == doctest::Approx(6));
    CHECK(dense(1, 0) == doctest::Approx(5));

    CHECK_THROWS_AS(build_pa_chain(1, 1, 1, 0, 0), ValidationError);
    CHECK_THROWS_AS(build_pa_chain(3, 0, 1, 0, 0), ValidationError);
}

TEST_CASE("lumped transient") {
    SUBCASE("stationary vector is a fixed point") {
        auto chain = build_pa_chain(10, 0.7, 1.9, 4.0, 1.5);
        auto pbar = pa_steady_state(chain);
        auto grid = testutil::linspace(1.0, 5.0, 3);
        auto traj = pa_transient(chain, pbar, grid);
        for (const auto& p : traj.distributions)
            CHECK((p - pbar).cwiseAbs().maxCoeff() < 1e-11);
    }
    SUBCASE("mean relaxation without influence") {
        // Independent symmetric unit-rate agents starting at opinion 2:
        // P(opinion 1 at t) = (1 - e^{-2t}) / 2, counts are binomial.
        const int n = 8;
        auto chain = build_pa_chain(n, 1, 1, 0, 0);
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n + 1);
        p0(0) = 1.0;
        auto grid = testutil::linspace(0.25, 2.0, 8);
        auto traj = pa_transient(chain, p0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double mean = 0.0;
            for (int j = 0; j <= n; ++j) mean += j * traj.distributions[i](j);
            double expected = n * 0.5 * (1.0 - std::exp(-2.0 * grid[i]));
            CHECK(mean == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    SUBCASE("matches the dense matrix exponential") {
        auto chain = build_pa_chain(6, 0.5, 1.5, 8.0, 3.0);
        Eigen::MatrixXd dense = Eigen::MatrixXd(chain.generator());
        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(7);
        p0(3) = 1.0;
        auto grid = testutil::linspace(0.1, 3.0, 5);
        auto traj = pa_transient(chain, p0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Eigen::VectorXd oracle = testutil::expm_propagate(dense, p0, grid[i]);
            CHECK((traj.distributions[i] - oracle).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("schedule transient") {
    std::vector<InfluenceIntensities> segs{
        InfluenceIntensities(Eigen::Vector2d(0, 0)),
        InfluenceIntensities(Eigen::Vector2d(20, 0)),
    };
    IntensitySchedule sched({1.0}, segs);
    const int n = 12;
    Eigen::VectorXd p0 = initial_count_distribution(InitialCountKind::Binomial, n);

    SUBCASE("agrees segment-wise with the single-intensity solver") {
        auto grid = testutil::linspace(0.25, 3.0, 12);
        auto traj = pa_transient_schedule(n, 1, 1, sched, p0, grid);
        // first segment: lambda = 0
        auto chain0 = build_pa_chain(n, 1, 1, 0, 0);
        auto first = pa_transient(chain0, p0, testutil::linspace(0.25, 1.0, 4));
        for (int i = 0; i < 4; ++i)
            CHECK((traj.distributions[i] - first.distributions[i])
                      .cwiseAbs()
                      .maxCoeff() < 1e-11);
        // second segment: restart from the breakpoint state
        auto chain1 = build_pa_chain(n, 1, 1, 20, 0);
        Eigen::VectorXd at_break = first.distributions[3];
        auto rest = pa_transient(chain1, at_break,
                                 testutil::linspace(0.25, 2.0, 8));
        for (int i = 0; i < 8; ++i)
            CHECK((traj.distributions[4 + i] - rest.distributions[i])
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
    }
    SUBCASE("constant schedule reduces to the plain transient") {
        IntensitySchedule flat(InfluenceIntensities(Eigen::Vector2d(5, 2)));
        auto grid = testutil::linspace(0.5, 4.0, 6);
        auto a = pa_transient_schedule(n, 1, 2, flat, p0, grid);
        auto b = pa_transient(build_pa_chain(n, 1, 2, 5, 2), p0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK((a.distributions[i] - b.distributions[i]).cwiseAbs().maxCoeff() <
                  1e-11);
    }
}

TEST_CASE("lumped steady state") {
    SUBCASE("detailed balance holds") {
        auto chain = build_pa_chain(25, 0.4, 1.1, 6.0, 2.5);
        auto pbar = pa_steady_state(chain);
        CHECK(pbar.minCoeff() > 0.0);
        CHECK(pbar.sum() == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 1; j <= 25; ++j) {
            double flow = pbar(j - 1) * chain.birth_rate(j);
            double back = pbar(j) * chain.death_rate(j - 1);
            CHECK(flow == doctest::Approx(back).epsilon(1e-11));
        }
    }
    SUBCASE("global balance against the generator") {
        auto chain = build_pa_chain(40, 1.3, 0.6, 0.5, 9.0);
        auto pbar = pa_steady_state(chain);
        Eigen::MatrixXd dense = Eigen::MatrixXd(chain.generator());
        CHECK((pbar.transpose() * dense).cwiseAbs().maxCoeff() < 1e-11);
    }
    SUBCASE("survives strong herding without underflow") {
        auto chain = build_pa_chain(200, 1, 1, 500, 500);
        auto pbar = pa_steady_state(chain);
        CHECK(pbar.allFinite());
        CHECK(pbar.sum() == doctest::Approx(1.0).epsilon(1e-12));
        // U-shaped: unanimity is far more likely than a split population
        CHECK(pbar(0) > 10 * pbar(100));
        // stronger herding on a smaller population is nearly bimodal
        auto small = pa_steady_state(build_pa_chain(20, 1, 1, 500, 500));
        CHECK(small(0) + small(20) > 0.8);
        CHECK(small(10) < 1e-2);
    }
    SUBCASE("swapping opinions mirrors the distribution") {
        const int n = 15;
        auto a = pa_steady_state(build_pa_chain(n, 0.8, 1.7, 3.0, 5.0));
        auto b = pa_steady_state(build_pa_chain(n, 1.7, 0.8, 5.0, 3.0));
        for (int j = 0; j <= n; ++j)
            CHECK(a(j) == doctest::Approx(b(n - j)).epsilon(1e-11));
    }
}

TEST_CASE("stationary moments and closed forms") {
    SUBCASE("unbiased mean is the stand-alone stationary probability") {
        CHECK(uipa_mean_closed_form(1, 3) == doctest::Approx(0.75));
        for (double lambda : {0.0, 1.0, 10.0, 200.0}) {
            auto m = pa_moments(pa_steady_state(build_pa_chain(20, 1, 3, lambda, lambda)));
            CHECK(m.mean == doctest::Approx(0.75).epsilon(1e-10));
        }
    }
    SUBCASE("unbiased variance closed form matches the chain") {
        // sigma~^2/N * (1 + lambda (N-1) / (lambda + q (N-1))), q = q12+q21
        CHECK(uipa_variance_closed_form(100, 1, 1, 0) ==
              doctest::Approx(0.0025).epsilon(1e-12));
        CHECK(uipa_variance_closed_form(100, 1, 1, 2) ==
              doctest::Approx(0.004975).epsilon(1e-9));
        CHECK(uipa_variance_closed_form(100, 1, 1, 10) ==
              doctest::Approx(0.014399).epsilon(1e-4));
        for (int n : {5, 20, 100}) {
            for (double lambda : {0.0, 0.5, 4.0, 30.0}) {
                auto m = pa_moments(
                    pa_steady_state(build_pa_chain(n, 0.7, 1.3, lambda, lambda)));
                CHECK(m.variance ==
                      doctest::Approx(uipa_variance_closed_form(n, 0.7, 1.3, lambda))
                          .epsilon(1e-9));
            }
        }
    }
    SUBCASE("unbiased variance grows with lambda") {
        double prev = -1.0;
        for (double lambda : {0.0, 1.0, 5.0, 25.0, 125.0}) {
            double v = uipa_variance_closed_form(50, 1, 1, lambda);
            CHECK(v > prev);
            prev = v;
        }
    }
    SUBCASE("three-agent biased mean closed form") {
        // q12=q21=1, lambda1=2, lambda2=0 evaluates to 22/32
        CHECK(example_n3_mean_closed_form(1, 1, 2, 0) ==
              doctest::Approx(22.0 / 32).epsilon(1e-13));
        auto m = pa_moments(pa_steady_state(build_pa_chain(3, 1, 1, 2, 0)));
        CHECK(m.mean == doctest::Approx(22.0 / 32).epsilon(1e-11));
        // agreement over a sweep of biased intensities
        for (double l1 : {0.0, 1.5, 6.0}) {
            for (double l2 : {0.0, 2.0}) {
                auto mm = pa_moments(
                    pa_steady_state(build_pa_chain(3, 0.9, 1.4, l1, l2)));
                CHECK(mm.mean ==
                      doctest::Approx(example_n3_mean_closed_form(0.9, 1.4, l1, l2))
                          .epsilon(1e-11));
            }
        }
    }
    SUBCASE("one-sided promotion drives consensus") {
        auto m = pa_moments(pa_steady_state(build_pa_chain(60, 1, 1, 50, 0)));
        CHECK(m.mean > 0.9);
    }
}

TEST_CASE("percentiles") {
    Eigen::VectorXd p(4);
    p << 0.1, 0.4, 0.3, 0.2;
    CHECK(pa_percentile(p, 0.05) == 0);
    CHECK(pa_percentile(p, 0.1) == 0);
    CHECK(pa_percentile(p, 0.11) == 1);
    CHECK(pa_percentile(p, 0.5) == 1);
    CHECK(pa_percentile(p, 0.975) == 3);

    // binomial(100, 1/2) upper 97.5th percentile is 60
    auto binom = initial_count_distribution(InitialCountKind::Binomial, 100);
    CHECK(pa_percentile(binom, 0.975) == 60);
    CHECK(binomial_cdf(100, 0.5, 60) >= 0.975);
    CHECK(binomial_cdf(100, 0.5, 59) < 0.975);
}

TEST_CASE("initial count distributions") {
    SUBCASE("binomial") {
        auto p = initial_count_distribution(InitialCountKind::Binomial, 10, 0.3);
        CHECK(p.size() == 11);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 0; k <= 10; ++k) {
            double pmf = binomial_cdf(10, 0.3, k) -
                         (k > 0 ? binomial_cdf(10, 0.3, k - 1) : 0.0);
            CHECK(p(k) == doctest::Approx(pmf).epsilon(1e-9));
        }
        auto degenerate = initial_count_distribution(InitialCountKind::Binomial, 5, 1.0);
        CHECK(degenerate(5) == 1.0);
    }
    SUBCASE("uniform and deterministic") {
        auto u = initial_count_distribution(InitialCountKind::Uniform, 4);
        CHECK(u.size() == 5);
        CHECK(u(2) == doctest::Approx(0.2));
        auto d = initial_count_distribution(InitialCountKind::Deterministic, 4,
                                            0.5, 3);
        CHECK(d(3) == 1.0);
        CHECK(d.sum() == 1.0);
    }
}
