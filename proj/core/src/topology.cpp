#include "opinet/topology.hpp"

#include <set>

#include "opinet/rng.hpp"

namespace opinet {

TopologySpec::Kind TopologySpec::parse_kind(const std::string& name) {
    if (name == "empty" || name == "noninteracting") return Kind::Empty;
    if (name == "complete") return Kind::Complete;
    if (name == "star") return Kind::Star;
    if (name == "smallworld") return Kind::SmallWorld;
    throw ValidationError("unknown topology kind: " + name);
}

std::string TopologySpec::kind_name(Kind kind) {
    switch (kind) {
    case Kind::Empty: return "empty";
    case Kind::Complete: return "complete";
    case Kind::Star: return "star";
    case Kind::SmallWorld: return "smallworld";
    }
    return "?";
}

namespace {

Graph watts_strogatz(const TopologySpec& spec) {
    const int n = spec.n;
    if (spec.k < 1 || 2 * spec.k >= n)
        throw ValidationError("smallworld: need 1 <= k < N/2");
    if (spec.p < 0.0 || spec.p > 1.0)
        throw ValidationError("smallworld: need 0 <= p <= 1");

    auto key = [n](int u, int v) {
        if (u > v) std::swap(u, v);
        return static_cast<std::int64_t>(u) * n + v;
    };
    std::set<std::int64_t> present;
    // ring lattice: node i connects to its k nearest neighbours on each side
    std::vector<std::pair<int, int>> edges;
    for (int d = 1; d <= spec.k; ++d)
        for (int i = 0; i < n; ++i) {
            int j = (i + d) % n;
            edges.emplace_back(i, j);
            present.insert(key(i, j));
        }

    Rng rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> node(0, n - 1);
    // rewire lattice edges in construction order, keeping the edge count
    std::size_t e = 0;
    for (int d = 1; d <= spec.k; ++d)
        for (int i = 0; i < n; ++i, ++e) {
            if (unit(rng) >= spec.p) continue;
            auto [u, v] = edges[e];
            int target = -1;
            for (int attempt = 0; attempt < 64 * n; ++attempt) {
                int m = node(rng);
                if (m == u || (m != v && present.count(key(u, m)))) continue;
                target = m;
                break;
            }
            if (target < 0 || target == v) continue; // u saturated, keep edge
            present.erase(key(u, v));
            present.insert(key(u, target));
            edges[e] = {u, target};
        }
    return Graph(n, std::move(edges));
}

} // namespace

Graph generate_topology(const TopologySpec& spec) {
    if (spec.n < 1) throw ValidationError("topology: need N >= 1");
    std::vector<std::pair<int, int>> edges;
    switch (spec.kind) {
    case TopologySpec::Kind::Empty:
        break;
    case TopologySpec::Kind::Complete:
        for (int u = 0; u < spec.n; ++u)
            for (int v = u + 1; v < spec.n; ++v) edges.emplace_back(u, v);
        break;
    case TopologySpec::Kind::Star:
        for (int v = 1; v < spec.n; ++v) edges.emplace_back(0, v);
        break;
    case TopologySpec::Kind::SmallWorld:
        return watts_strogatz(spec);
    }
    return Graph(spec.n, std::move(edges));
}

} // namespace opinet
