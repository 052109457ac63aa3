#include "opinet/master.hpp"

#include <cmath>
#include <sstream>

namespace opinet {

MasterStateSpace::MasterStateSpace(int agent_count, int opinion_count,
                                   std::int64_t max_states)
    : agents_(agent_count), opinions_(opinion_count) {
    if (agent_count < 1) throw ValidationError("master: need at least one agent");
    if (opinion_count < 2) throw ValidationError("master: need at least two opinions");
    dim_ = 1;
    for (int r = 0; r < agents_; ++r) {
        if (dim_ > max_states / opinions_)
            throw StateSpaceTooLarge(
                "master: M^N exceeds the state-space guard of " +
                std::to_string(max_states) + " states");
        dim_ *= opinions_;
    }
    weight_.resize(agents_);
    std::int64_t w = 1;
    for (int r = agents_ - 1; r >= 0; --r) {
        weight_[r] = w;
        w *= opinions_;
    }
}

std::int64_t MasterStateSpace::encode(std::span<const int> opinions) const {
    std::int64_t index = 0;
    for (int r = 0; r < agents_; ++r) index += opinions[r] * weight_[r];
    return index;
}

void MasterStateSpace::decode(std::int64_t index, std::span<int> opinions) const {
    for (int r = 0; r < agents_; ++r) {
        opinions[r] = static_cast<int>(index / weight_[r]);
        index %= weight_[r];
    }
}

int MasterStateSpace::opinion_of(std::int64_t index, int r) const {
    return static_cast<int>((index / weight_[r]) % opinions_);
}

std::int64_t MasterStateSpace::with_opinion(std::int64_t index, int r,
                                            int current, int j) const {
    return index + (j - current) * weight_[r];
}

namespace {

using Triplet = Eigen::Triplet<double>;

SparseGenerator assemble(const NetworkModel& network, std::int64_t max_states,
                         bool standalone_part, const InfluenceIntensities* lambdas) {
    const int n = network.agent_count();
    const int m = network.opinion_count();
    MasterStateSpace space(n, m, max_states);
    const std::int64_t dim = space.state_count();

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(dim) * (n * (m - 1) + 1));

    std::vector<int> sigma(n);
    std::vector<int> counts(m);
    for (std::int64_t s = 0; s < dim; ++s) {
        space.decode(s, sigma);
        double exit = 0.0;
        for (int r = 0; r < n; ++r) {
            const int i = sigma[r];
            const int deg = network.graph().degree(r);
            if (!standalone_part && deg == 0) continue; // isolated: no influence
            if (!standalone_part) {
                std::fill(counts.begin(), counts.end(), 0);
                for (int nb : network.graph().neighbors(r)) ++counts[sigma[nb]];
            }
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                double rate = 0.0;
                if (standalone_part) {
                    rate = network.agent(r).rate(i, j);
                } else if (counts[j] > 0) {
                    rate = (*lambdas)[j] * counts[j] / deg;
                }
                if (rate == 0.0) continue;
                trips.emplace_back(static_cast<int>(s),
                                   static_cast<int>(space.with_opinion(s, r, i, j)),
                                   rate);
                exit += rate;
            }
        }
        if (exit != 0.0)
            trips.emplace_back(static_cast<int>(s), static_cast<int>(s), -exit);
    }

    SparseGenerator gen(dim, dim);
    gen.setFromTriplets(trips.begin(), trips.end());
    gen.makeCompressed();
    return gen;
}

} // namespace

SparseGenerator build_noninteracting_generator(const NetworkModel& network,
                                               std::int64_t max_states) {
    return assemble(network, max_states, true, nullptr);
}

SparseGenerator build_interaction_generator(const NetworkModel& network,
                                            const InfluenceIntensities& lambdas,
                                            std::int64_t max_states) {
    if (lambdas.opinion_count() != network.opinion_count())
        throw DimensionMismatch("interaction generator: intensity dimension mismatch");
    return assemble(network, max_states, false, &lambdas);
}

SparseGenerator build_master_generator(const NetworkModel& network,
                                       std::int64_t max_states) {
    SparseGenerator q0 = build_noninteracting_generator(network, max_states);
    SparseGenerator a0 =
        build_interaction_generator(network, network.schedule().segment(0), max_states);
    SparseGenerator gen = q0 + a0;
    gen.makeCompressed();
    return gen;
}

ProbabilityTrajectory master_transient(const SparseGenerator& gen,
                                       const Eigen::VectorXd& pi0,
                                       std::span<const double> grid) {
    return uniformized_transient(gen, pi0, grid);
}

Eigen::VectorXd master_steady_state(const SparseGenerator& gen) {
    return sparse_steady_state(gen);
}

Eigen::VectorXd marginal_of_agent(const Eigen::VectorXd& pi,
                                  const MasterStateSpace& space, int r) {
    if (r < 0 || r >= space.agent_count())
        throw ValidationError("marginal_of_agent: agent index out of range");
    if (pi.size() != space.state_count())
        throw DimensionMismatch("marginal_of_agent: dimension mismatch");
    Eigen::VectorXd marg = Eigen::VectorXd::Zero(space.opinion_count());
    for (std::int64_t s = 0; s < space.state_count(); ++s)
        marg(space.opinion_of(s, r)) += pi(s);
    return marg;
}

Eigen::MatrixXd pair_joint(const Eigen::VectorXd& pi,
                           const MasterStateSpace& space, int r, int s) {
    if (r < 0 || r >= space.agent_count() || s < 0 || s >= space.agent_count())
        throw ValidationError("pair_joint: agent index out of range");
    if (r == s) throw ValidationError("pair_joint: agents must differ");
    if (pi.size() != space.state_count())
        throw DimensionMismatch("pair_joint: dimension mismatch");
    Eigen::MatrixXd joint =
        Eigen::MatrixXd::Zero(space.opinion_count(), space.opinion_count());
    for (std::int64_t x = 0; x < space.state_count(); ++x)
        joint(space.opinion_of(x, r), space.opinion_of(x, s)) += pi(x);
    return joint;
}

Eigen::VectorXd count_distribution(const Eigen::VectorXd& pi,
                                   const MasterStateSpace& space, int opinion) {
    if (opinion < 0 || opinion >= space.opinion_count())
        throw ValidationError("count_distribution: opinion out of range");
    if (pi.size() != space.state_count())
        throw DimensionMismatch("count_distribution: dimension mismatch");
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(space.agent_count() + 1);
    for (std::int64_t s = 0; s < space.state_count(); ++s) {
        int c = 0;
        for (int r = 0; r < space.agent_count(); ++r)
            if (space.opinion_of(s, r) == opinion) ++c;
        dist(c) += pi(s);
    }
    return dist;
}

std::string generator_to_coo(const SparseGenerator& gen) {
    std::ostringstream os;
    os.precision(17);
    os << gen.rows() << " " << gen.nonZeros() << "\n";
    for (int i = 0; i < gen.outerSize(); ++i)
        for (SparseGenerator::InnerIterator it(gen, i); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
    return os.str();
}

} // namespace opinet
