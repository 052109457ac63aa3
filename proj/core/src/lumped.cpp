#include "opinet/lumped.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace opinet {

BirthDeathChain::BirthDeathChain(std::vector<double> mu, std::vector<double> nu)
    : mu_(std::move(mu)), nu_(std::move(nu)) {
    if (mu_.empty() || mu_.size() != nu_.size())
        throw ValidationError("birth-death chain: need N birth and N death rates");
    for (double r : mu_)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw ValidationError("birth-death chain: birth rates must be finite and >= 0");
    for (double r : nu_)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw ValidationError("birth-death chain: death rates must be finite and >= 0");
}

bool BirthDeathChain::irreducible() const {
    return std::all_of(mu_.begin(), mu_.end(), [](double r) { return r > 0.0; }) &&
           std::all_of(nu_.begin(), nu_.end(), [](double r) { return r > 0.0; });
}

SparseGenerator BirthDeathChain::generator() const {
    const int n = agent_count();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(3 * (n + 1));
    for (int i = 0; i <= n; ++i) {
        double exit = 0.0;
        if (i < n && mu_[i] != 0.0) {
            trips.emplace_back(i, i + 1, mu_[i]);
            exit += mu_[i];
        }
        if (i > 0 && nu_[i - 1] != 0.0) {
            trips.emplace_back(i, i - 1, nu_[i - 1]);
            exit += nu_[i - 1];
        }
        if (exit != 0.0) trips.emplace_back(i, i, -exit);
    }
    SparseGenerator gen(n + 1, n + 1);
    gen.setFromTriplets(trips.begin(), trips.end());
    gen.makeCompressed();
    return gen;
}

BirthDeathChain build_pa_chain(int n, double q12, double q21, double lambda1,
                               double lambda2) {
    if (n < 2)
        throw ValidationError("pa chain: need N >= 2 (rates divide by N-1)");
    if (!(q12 > 0.0) || !(q21 > 0.0))
        throw ValidationError("pa chain: need q12, q21 > 0");
    if (lambda1 < 0.0 || lambda2 < 0.0)
        throw ValidationError("pa chain: intensities must be >= 0");
    std::vector<double> mu(n), nu(n);
    for (int j = 1; j <= n; ++j)
        mu[j - 1] = (q21 + lambda1 * (j - 1) / (n - 1.0)) * (n - j + 1);
    for (int j = 0; j <= n - 1; ++j)
        nu[j] = (q12 + lambda2 * (n - (j + 1)) / (n - 1.0)) * (j + 1);
    return BirthDeathChain(std::move(mu), std::move(nu));
}

ProbabilityTrajectory pa_transient(const BirthDeathChain& chain,
                                   const Eigen::VectorXd& p0,
                                   std::span<const double> grid) {
    if (p0.size() != chain.agent_count() + 1)
        throw DimensionMismatch("pa_transient: p0 must live on {0..N}");
    return uniformized_transient(chain.generator(), p0, grid);
}

ProbabilityTrajectory pa_transient_schedule(int n, double q12, double q21,
                                            const IntensitySchedule& schedule,
                                            const Eigen::VectorXd& p0,
                                            std::span<const double> grid) {
    if (schedule.opinion_count() != 2)
        throw ValidationError("pa_transient_schedule: schedule must be two-opinion");
    ProbabilityTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.distributions.reserve(grid.size());

    // Rates are constant within a segment, so chaining uniformization runs
    // segment-wise solves the time-varying equation exactly.
    std::vector<SparseGenerator> gens;
    for (std::size_t s = 0; s < schedule.segment_count(); ++s) {
        const auto& lam = schedule.segment(s);
        gens.push_back(build_pa_chain(n, q12, q21, lam[0], lam[1]).generator());
    }

    Eigen::VectorXd p = p0;
    double t = 0.0;
    for (double target : grid) {
        while (t < target) {
            const std::size_t seg = schedule.segment_index(t);
            double stop = target;
            if (seg + 1 < schedule.segment_count())
                stop = std::min(stop, schedule.breakpoints()[seg]);
            const std::array<double, 1> step{stop - t};
            p = uniformized_transient(gens[seg], p, step).distributions.front();
            t = stop;
        }
        out.distributions.push_back(p);
    }
    return out;
}

Eigen::VectorXd pa_steady_state(const BirthDeathChain& chain) {
    if (!chain.irreducible())
        throw ReducibleError("pa_steady_state: some birth or death rate is zero");
    const int n = chain.agent_count();
    // log-domain cumulative products; raw products overflow for large N*lambda
    Eigen::VectorXd logw(n + 1);
    logw(0) = 0.0;
    for (int i = 1; i <= n; ++i)
        logw(i) = logw(i - 1) + std::log(chain.birth_rate(i)) -
                  std::log(chain.death_rate(i - 1));
    const double shift = logw.maxCoeff();
    Eigen::VectorXd p = (logw.array() - shift).exp();
    p /= p.sum();
    return p;
}

FractionMoments pa_moments(const Eigen::VectorXd& pbar) {
    const int n = static_cast<int>(pbar.size()) - 1;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i <= n; ++i) {
        m1 += i * pbar(i);
        m2 += static_cast<double>(i) * i * pbar(i);
    }
    return {m1 / n, (m2 - m1 * m1) / (static_cast<double>(n) * n)};
}

double uipa_mean_closed_form(double q12, double q21) {
    if (!(q12 > 0.0) || !(q21 > 0.0))
        throw ValidationError("uipa mean: need q12, q21 > 0");
    return q21 / (q12 + q21);
}

double uipa_variance_closed_form(int n, double q12, double q21, double lambda) {
    if (n < 2) throw ValidationError("uipa variance: need N >= 2");
    if (!(q12 > 0.0) || !(q21 > 0.0) || lambda < 0.0)
        throw ValidationError("uipa variance: invalid parameters");
    const double q = q12 + q21;
    const double sigma2 = q12 * q21 / (q * q);
    return sigma2 / n * (1.0 + lambda * (n - 1) / (lambda + q * (n - 1)));
}

double example_n3_mean_closed_form(double q12, double q21, double lambda1,
                                   double lambda2) {
    if (!(q12 > 0.0) || !(q21 > 0.0) || lambda1 < 0.0 || lambda2 < 0.0)
        throw ValidationError("three-agent mean: invalid parameters");
    const double q = q12 + q21;
    const double phi = 2 * q * q + 3 * q * lambda1 + lambda1 * lambda1;
    const double num = q21 * (phi + q12 * (lambda2 - lambda1));
    const double den = q * phi + q12 * (3 * q * (lambda2 - lambda1) +
                                        (lambda2 * lambda2 - lambda1 * lambda1));
    if (den == 0.0) throw ValidationError("three-agent mean: degenerate denominator");
    return num / den;
}

int pa_percentile(const Eigen::VectorXd& p, double q) {
    if (!(q > 0.0) || !(q < 1.0))
        throw ValidationError("percentile: quantile must be in (0,1)");
    double cum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        cum += p(i);
        if (cum >= q) return i;
    }
    return static_cast<int>(p.size()) - 1;
}

Eigen::VectorXd initial_count_distribution(InitialCountKind kind, int n,
                                           double pi1, int value) {
    if (n < 1) throw ValidationError("initial distribution: need N >= 1");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n + 1);
    switch (kind) {
    case InitialCountKind::Deterministic:
        if (value < 0 || value > n)
            throw ValidationError("initial distribution: count out of range");
        p(value) = 1.0;
        break;
    case InitialCountKind::Uniform:
        p.setConstant(1.0 / (n + 1));
        break;
    case InitialCountKind::Binomial: {
        if (!(pi1 >= 0.0) || !(pi1 <= 1.0))
            throw ValidationError("initial distribution: pi1 must be in [0,1]");
        for (int i = 0; i <= n; ++i) {
            double logp = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                          std::lgamma(n - i + 1.0);
            if (pi1 > 0.0) logp += i * std::log(pi1);
            else if (i > 0) { p(i) = 0.0; continue; }
            if (pi1 < 1.0) logp += (n - i) * std::log1p(-pi1);
            else if (i < n) { p(i) = 0.0; continue; }
            p(i) = std::exp(logp);
        }
        p /= p.sum();
        break;
    }
    }
    return p;
}

} // namespace opinet
