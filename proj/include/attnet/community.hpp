#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "attnet/network.hpp"

namespace attnet {

struct VisitRates {
    /// Indexed like Digraph::from(network).codes.
    std::vector<double> rates;
    double teleport = 0.15;
};

/// Stationary distribution of the weighted random walk that teleports to a
/// uniformly random node with probability `teleport` (always, from dangling
/// nodes). Power iteration to L1 tolerance `tol`; NonConvergence after 10,000
/// iterations.
VisitRates visit_rates(const Digraph& g, double teleport = 0.15, double tol = 1e-12);

/// Flow on each arc of the walk, excluding teleportation:
/// (1 - teleport) * rate(u) * w(u,v) / strength(u). Parallel to g.out.
std::vector<std::vector<double>> arc_flows(const Digraph& g, const VisitRates& v);

struct Partition {
    /// module[i] for node i of the Digraph; ids are dense from 0 and numbered
    /// in order of first appearance.
    std::vector<int> module;
    double codelength = 0.0;

    int module_count() const;
};

/// Renumbers module ids by order of first appearance.
std::vector<int> canonical_modules(const std::vector<int>& module);

/// Two-level map equation in bits:
///   L = q H(Q) + sum_m p_m H(P_m)
/// with q = sum of module entry flows, Q the normalized entry flows, and P_m
/// module m's exit flow together with its nodes' visit rates. Entry and exit
/// flows count only recorded (non-teleport) steps. Throws
/// IncompletePartition when `module` does not cover every node.
double map_equation(const Digraph& g, const VisitRates& v, const std::vector<int>& module);

struct CommunityOptions {
    std::uint64_t seed = 0;
    double teleport = 0.15;
    /// Independent searches; the lowest codelength wins (earliest on ties).
    int restarts = 1;
    /// When set, receives the codelength after every accepted move.
    std::vector<double>* move_trace = nullptr;
};

/// Greedy map-equation search. Nodes start in singleton modules and move to
/// the neighbouring module with the largest codelength decrease, in an order
/// shuffled from the seed. Converged modules are merged into super-nodes and
/// the search repeats on the coarser graph; a node-level refinement pass
/// follows each coarsening. The result is never worse than the one-module
/// partition.
Partition detect_communities(const Digraph& g, const CommunityOptions& opts = {});
Partition detect_communities(const AttentionNetwork& n, const CommunityOptions& opts = {});

void write_partition_csv(std::ostream& out, const Digraph& g, const Partition& p);

}  // namespace attnet
