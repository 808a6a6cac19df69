#include "attnet/regions.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "csv.hpp"

namespace attnet {

RegionFlow region_flow_matrix(const AttentionNetwork& n, const RegionMap& rm) {
    std::string missing;
    std::set<Region> present;
    for (const auto& c : n.nodes) {
        auto it = rm.find(c);
        if (it == rm.end()) {
            missing += (missing.empty() ? "" : " ") + c.str();
        } else {
            present.insert(it->second);
        }
    }
    if (!missing.empty()) throw Error(Errc::UnmappedCountry, missing);

    RegionFlow flow;
    for (Region r : kAllRegions) {
        if (present.contains(r)) flow.regions.push_back(r);
    }
    const std::size_t k = flow.regions.size();
    auto slot = [&](Region r) {
        return static_cast<std::size_t>(std::find(flow.regions.begin(), flow.regions.end(), r) - flow.regions.begin());
    };
    flow.totals.assign(k, std::vector<double>(k, 0.0));
    for (const auto& [key, w] : n.edges) flow.totals[slot(rm.at(key.first))][slot(rm.at(key.second))] += w;

    flow.matrix.assign(k, std::vector<double>(k, 0.0));
    flow.zero_row.assign(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (double w : flow.totals[i]) row += w;
        if (!(row > 0)) {
            flow.zero_row[i] = true;
            continue;
        }
        for (std::size_t j = 0; j < k; ++j) flow.matrix[i][j] = flow.totals[i][j] / row;
    }
    return flow;
}

RegionGiniComparison region_gini_compare(const AttentionNetwork& media, const AttentionNetwork& public_,
                                         const RegionMap& rm) {
    const auto fm = region_flow_matrix(media, rm);
    const auto fp = region_flow_matrix(public_, rm);
    RegionGiniComparison out;
    for (Region r : kAllRegions) {
        const auto im = std::find(fm.regions.begin(), fm.regions.end(), r);
        const auto ip = std::find(fp.regions.begin(), fp.regions.end(), r);
        if (im == fm.regions.end() || ip == fp.regions.end()) continue;
        const auto rm_idx = static_cast<std::size_t>(im - fm.regions.begin());
        const auto rp_idx = static_cast<std::size_t>(ip - fp.regions.begin());
        if (fm.zero_row[rm_idx] || fp.zero_row[rp_idx]) {
            throw Error(Errc::ZeroMean, std::string(region_name(r)) + " has no outgoing attention in one layer");
        }
        out.regions.push_back(r);
        out.media_gini.push_back(stats::gini(fm.matrix[rm_idx]));
        out.public_gini.push_back(stats::gini(fp.matrix[rp_idx]));
    }
    auto test = stats::mann_whitney_u(out.media_gini, out.public_gini);
    const double n1n2 = static_cast<double>(out.media_gini.size() * out.public_gini.size());
    test.statistic = std::min(test.statistic, n1n2 - test.statistic);
    out.test = test;
    return out;
}

void write_region_matrix_csv(std::ostream& out, const RegionFlow& flow) {
    out << "source";
    for (Region r : flow.regions) out << ',' << region_name(r);
    out << '\n';
    for (std::size_t i = 0; i < flow.regions.size(); ++i) {
        out << region_name(flow.regions[i]);
        for (double v : flow.matrix[i]) out << ',' << csv::fmt_real(v);
        out << '\n';
    }
}

}  // namespace attnet
