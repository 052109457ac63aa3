#include "opinet/uniformization.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "opinet/errors.hpp"

namespace opinet {

namespace {

using ColSparse = Eigen::SparseMatrix<double>;

double max_exit_rate(const SparseGenerator& gen) {
    double m = 0.0;
    for (int i = 0; i < gen.rows(); ++i) m = std::max(m, -gen.coeff(i, i));
    return m;
}

// P' = (I + G/Lambda)', stored column-major for fast left-multiplication.
ColSparse uniformized_kernel_transposed(const SparseGenerator& gen, double lambda) {
    ColSparse pt = ColSparse(gen.transpose()) / lambda;
    for (int i = 0; i < pt.rows(); ++i) pt.coeffRef(i, i) += 1.0;
    pt.makeCompressed();
    return pt;
}

// One uniformization step of size `a` = Lambda*dt (a <= a_max).
void poisson_step(const ColSparse& pt, Eigen::VectorXd& v, double a, double tail_tol) {
    double w = std::exp(-a);
    double cum = w;
    Eigen::VectorXd acc = w * v;
    Eigen::VectorXd vk = v;
    const int k_max = static_cast<int>(a + 12.0 * std::sqrt(a + 1.0) + 64.0);
    for (int k = 1; cum < 1.0 - tail_tol && k <= k_max; ++k) {
        vk = pt * vk;
        w *= a / k;
        cum += w;
        acc += w * vk;
    }
    v = acc / cum; // renormalize the truncated tail
    v = v.cwiseMax(0.0);
    v /= v.sum();
}

} // namespace

ProbabilityTrajectory uniformized_transient(const SparseGenerator& gen,
                                            const Eigen::VectorXd& pi0,
                                            std::span<const double> grid,
                                            double tail_tol) {
    if (pi0.size() != gen.rows())
        throw DimensionMismatch("transient: initial distribution has wrong dimension");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1]))
            throw ValidationError("transient: grid must be increasing and >= 0");
    }

    const double lambda = 1.05 * max_exit_rate(gen);
    ProbabilityTrajectory out;
    out.times.assign(grid.begin(), grid.end());
    out.distributions.reserve(grid.size());

    Eigen::VectorXd v = pi0;
    if (lambda <= 0.0) { // frozen chain
        for (std::size_t i = 0; i < grid.size(); ++i) out.distributions.push_back(v);
        return out;
    }

    const ColSparse pt = uniformized_kernel_transposed(gen, lambda);
    const double max_step = 500.0 / lambda; // keeps Poisson weights in range
    double t = 0.0;
    for (double target : grid) {
        double dt = target - t;
        while (dt > 0.0) {
            double step = std::min(dt, max_step);
            poisson_step(pt, v, lambda * step, tail_tol);
            dt -= step;
        }
        t = target;
        out.distributions.push_back(v);
    }
    return out;
}

bool generator_irreducible(const SparseGenerator& gen) {
    const int n = static_cast<int>(gen.rows());
    auto reach = [&](const SparseGenerator& g) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::size_t visited = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (SparseGenerator::InnerIterator it(g, u); it; ++it) {
                int v = static_cast<int>(it.col());
                if (v != u && it.value() > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    ++visited;
                    stack.push_back(v);
                }
            }
        }
        return visited == static_cast<std::size_t>(n);
    };
    SparseGenerator gt = gen.transpose();
    return reach(gen) && reach(gt);
}

Eigen::VectorXd sparse_steady_state(const SparseGenerator& gen) {
    const int n = static_cast<int>(gen.rows());
    if (!generator_irreducible(gen))
        throw ReducibleError("steady state: generator is not irreducible");

    // G' x = 0 with the last equation replaced by sum(x) = 1.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(gen.nonZeros()) + n);
    for (int i = 0; i < gen.outerSize(); ++i)
        for (SparseGenerator::InnerIterator it(gen, i); it; ++it)
            if (it.col() != n - 1)
                trips.emplace_back(static_cast<int>(it.col()), i, it.value());
    for (int j = 0; j < n; ++j) trips.emplace_back(n - 1, j, 1.0);
    ColSparse a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;

    Eigen::SparseLU<ColSparse> lu;
    lu.compute(a);
    Eigen::VectorXd x;
    bool ok = lu.info() == Eigen::Success;
    if (ok) {
        x = lu.solve(rhs);
        ok = lu.info() == Eigen::Success;
    }
    if (ok) {
        x = x.cwiseMax(0.0);
        const double s = x.sum();
        ok = s > 0.0 && std::isfinite(s);
        if (ok) {
            x /= s;
            Eigen::VectorXd residual = gen.transpose() * x;
            ok = residual.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, max_exit_rate(gen));
        }
    }
    if (ok) return x;

    // fallback: power iteration on the uniformized kernel
    const double lambda = 1.05 * max_exit_rate(gen);
    const ColSparse pt = uniformized_kernel_transposed(gen, lambda);
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int iter = 0; iter < 2'000'000; ++iter) {
        Eigen::VectorXd next = pt * v;
        next /= next.sum();
        const double delta = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (delta < 1e-15) break;
    }
    return v;
}

} // namespace opinet
