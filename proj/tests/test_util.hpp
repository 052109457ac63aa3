#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <random>
#include <vector>

#include "opinet/model.hpp"
#include "opinet/rng.hpp"
#include "opinet/topology.hpp"

namespace testutil {

inline std::vector<double> linspace(double from, double to, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = from + (to - from) * i / (points - 1.0);
    return g;
}

/// Random irreducible rate matrix with off-diagonal rates in [lo, hi].
inline Eigen::MatrixXd random_rate_matrix(opinet::Rng& rng, int m,
                                          double lo = 0.1, double hi = 2.0) {
    std::uniform_real_distribution<double> rate(lo, hi);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            if (i != j) q(i, j) = rate(rng);
        q(i, i) = -q.row(i).sum();
    }
    return q;
}

/// Random connected graph: a random spanning tree plus extra random edges.
inline opinet::Graph random_connected_graph(opinet::Rng& rng, int n,
                                            int extra_edges = 2) {
    std::vector<std::pair<int, int>> edges;
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        edges.emplace_back(parent(rng), v);
    }
    auto has = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        for (auto [a, b] : edges)
            if (a == u && b == v) return true;
        return false;
    };
    for (int e = 0; e < extra_edges; ++e) {
        int u = node(rng), v = node(rng);
        if (u == v || has(u, v)) continue;
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    return opinet::Graph(n, std::move(edges));
}

/// Dense matrix exponential propagation of pi' = G' pi (oracle; independent
/// of the uniformization path).
inline Eigen::VectorXd expm_propagate(const Eigen::MatrixXd& gen,
                                      const Eigen::VectorXd& pi0, double t) {
    return (gen.transpose() * t).exp() * pi0;
}

} // namespace testutil
