#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "attnet/network.hpp"
#include "attnet/stats.hpp"

namespace attnet {

enum class Measure { Degree, Betweenness, Eigenvector, Closeness };
enum class Direction { In, Out, Total };

std::string_view measure_name(Measure m) noexcept;
std::string_view direction_name(Direction d) noexcept;

struct CentralityOptions {
    Direction direction = Direction::Total;
    /// Degree uses strength and eigenvector uses edge weights when true.
    bool weighted = true;
};

struct CentralityVector {
    Measure measure = Measure::Degree;
    std::map<CountryCode, double> values;
};

/// Degree: in/out/total (weighted) strength.
/// Betweenness: Brandes on the unweighted digraph, unnormalized.
/// Closeness: harmonic, sum of 1/d over reachable nodes; Out uses distances
/// from the node, In distances to it, Total the undirected graph.
/// Eigenvector: principal left eigenvector of the adjacency, computed by power
/// iteration with a 1e-6 uniform restart and unit Euclidean norm.
CentralityVector centralities(const AttentionNetwork& n, Measure measure, const CentralityOptions& opts = {});

/// The k out-neighbours with the largest weights, ties broken by ascending code.
std::vector<CountryCode> topk_neighbors(const AttentionNetwork& n, CountryCode node, std::size_t k);

/// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double jaccard_topk(std::vector<CountryCode> a, std::vector<CountryCode> b);

double gini_out_weights(const AttentionNetwork& n, CountryCode node);

struct NetworkSummary {
    std::size_t n_nodes = 0;
    std::size_t n_links = 0;
    std::optional<double> mean_degree;
    /// Average local clustering over nodes of the reciprocal undirected graph.
    std::optional<double> clustering;
    /// Degree assortativity of the reciprocal undirected graph.
    std::optional<double> assortativity;
    std::optional<double> scc_fraction;
    std::optional<double> reciprocity;
};

NetworkSummary network_summary(const AttentionNetwork& n);

/// Sizes of strongly connected components (Tarjan), in discovery order.
std::vector<int> strongly_connected_sizes(const Digraph& g);

/// Spearman correlation between the two layers' centralities over shared nodes.
stats::TestResult spearman_centrality_alignment(const AttentionNetwork& media, const AttentionNetwork& public_,
                                                Measure measure, const CentralityOptions& opts = {});

}  // namespace attnet
