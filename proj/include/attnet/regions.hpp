#pragma once

#include <iosfwd>
#include <vector>

#include "attnet/ingest.hpp"
#include "attnet/network.hpp"
#include "attnet/stats.hpp"

namespace attnet {

/// Row-normalized attention between regions. Rows are source regions,
/// columns destinations; intra-region country pairs fill the diagonal.
struct RegionFlow {
    /// Regions present among the network's nodes, in Africa..Oceania order.
    std::vector<Region> regions;
    std::vector<std::vector<double>> matrix;
    /// Raw summed weights before normalization.
    std::vector<std::vector<double>> totals;
    /// True for a region with no outgoing attention; its row stays all zero.
    std::vector<bool> zero_row;
};

/// Throws UnmappedCountry listing every node missing from `rm`.
RegionFlow region_flow_matrix(const AttentionNetwork& n, const RegionMap& rm);

struct RegionGiniComparison {
    std::vector<Region> regions;
    std::vector<double> media_gini;
    std::vector<double> public_gini;
    /// U is reported as min(U_media, U_public); p is two-sided.
    stats::TestResult test;
};

/// Gini of each region's outflow row in both layers, compared with a
/// Mann-Whitney U test (exact when the samples are small). Regions must have
/// outgoing attention in both layers.
RegionGiniComparison region_gini_compare(const AttentionNetwork& media, const AttentionNetwork& public_,
                                         const RegionMap& rm);

void write_region_matrix_csv(std::ostream& out, const RegionFlow& flow);

}  // namespace attnet
