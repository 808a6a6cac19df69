#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "attnet/core.hpp"
#include "attnet/ingest.hpp"
#include "attnet/stitch.hpp"

namespace attnet {

enum class Layer { Media, Public };

std::string_view layer_name(Layer l) noexcept;

using EdgeKey = std::pair<CountryCode, CountryCode>;

/// Weighted directed attention graph for one layer. No self-loops, all
/// weights strictly positive. `day` is set for daily networks and empty for
/// aggregates.
struct AttentionNetwork {
    Layer layer = Layer::Media;
    std::set<CountryCode> nodes;
    std::map<EdgeKey, double> edges;
    std::optional<Date> day;

    /// Adds weight to an edge, inserting both endpoints. Self-loops and
    /// non-positive weights are ignored.
    void add_weight(CountryCode source, CountryCode target, double weight);

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }
    bool has_edge(CountryCode s, CountryCode t) const { return edges.contains({s, t}); }

    bool operator==(const AttentionNetwork&) const = default;
};

using DailyNetworks = std::map<Date, AttentionNetwork>;

struct MultiplexAttention {
    AttentionNetwork media;
    AttentionNetwork public_;
    std::optional<DailyNetworks> daily_media;
    std::optional<DailyNetworks> daily_public;
};

/// Per-day media networks: weight is the summed article count, self-loops dropped.
DailyNetworks build_daily_media(const std::vector<AttentionEvent>& events);

/// Per-day public networks from stitched series; zero volume means no edge.
/// All series must share one period (PeriodMismatch otherwise).
DailyNetworks build_daily_public(const std::vector<Series>& series);

/// Superimposes daily networks: union of nodes and edges, summed weights.
AttentionNetwork aggregate(const DailyNetworks& daily, Layer layer);

struct BackboneParams {
    double alpha = 0.05;
};

/// Disparity-filter p-value of one edge share among `degree` edges:
/// (1 - share)^(degree - 1), or 1 when degree < 2.
double disparity_pvalue(double share, std::size_t degree);

/// Keeps an edge when its disparity p-value is below alpha on the source's
/// out-side or the target's in-side. The result holds only nodes incident to
/// a kept edge.
AttentionNetwork disparity_backbone(const AttentionNetwork& n, const BackboneParams& p = {});

/// Dense index view used by the graph algorithms. Node ids follow the sorted
/// country-code order of the network.
struct Digraph {
    struct Arc {
        int node;
        double weight;
    };
    std::vector<CountryCode> codes;
    std::vector<std::vector<Arc>> out;
    std::vector<std::vector<Arc>> in;

    static Digraph from(const AttentionNetwork& n);
    /// Builds from explicit 0..n-1 arcs; codes are synthesised as AA, AB, ...
    static Digraph from_arcs(int n, const std::vector<std::pair<int, int>>& arcs);

    int size() const { return static_cast<int>(codes.size()); }
    std::size_t arc_count() const;
    int index_of(CountryCode c) const;  // -1 when absent
    AttentionNetwork to_network(Layer layer) const;
};

void write_edge_list(std::ostream& out, const AttentionNetwork& n, bool header = true);

}  // namespace attnet
