#pragma once

#include <cstdint>
#include <string>

#include "opinet/model.hpp"

namespace opinet {

/// Generator parameters for the interaction graphs of the topology study.
struct TopologySpec {
    enum class Kind { Empty, Complete, Star, SmallWorld };
    Kind kind = Kind::Complete;
    int n = 1;
    // small-world (Watts-Strogatz) only: ring half-degree, rewiring
    // probability and PRNG seed.  "k" counts nearest neighbours on each
    // side, so the initial ring lattice has degree 2k.
    int k = 1;
    double p = 0.0;
    std::uint64_t seed = 0;

    static Kind parse_kind(const std::string& name);
    static std::string kind_name(Kind kind);
};

/// Deterministic given the spec (including the seed).
/// empty: no edges; complete: all pairs; star: node 0 joined to all others;
/// smallworld: ring lattice with k neighbours per side, each lattice edge
/// independently rewired with probability p (duplicate/self targets redrawn).
Graph generate_topology(const TopologySpec& spec);

} // namespace opinet
