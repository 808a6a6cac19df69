#include "attnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "csv.hpp"

namespace attnet {

std::string_view layer_name(Layer l) noexcept { return l == Layer::Media ? "media" : "public"; }

void AttentionNetwork::add_weight(CountryCode source, CountryCode target, double weight) {
    if (source == target || !(weight > 0)) return;
    nodes.insert(source);
    nodes.insert(target);
    edges[{source, target}] += weight;
}

DailyNetworks build_daily_media(const std::vector<AttentionEvent>& events) {
    DailyNetworks daily;
    for (const auto& ev : events) {
        if (ev.source == ev.target || ev.count <= 0) continue;
        auto [it, fresh] = daily.try_emplace(ev.date);
        if (fresh) {
            it->second.layer = Layer::Media;
            it->second.day = ev.date;
        }
        it->second.add_weight(ev.source, ev.target, static_cast<double>(ev.count));
    }
    return daily;
}

DailyNetworks build_daily_public(const std::vector<Series>& series) {
    DailyNetworks daily;
    if (series.empty()) return daily;
    const Period period = series.front().period();
    for (const auto& s : series) {
        if (!(s.period() == period)) {
            throw Error(Errc::PeriodMismatch, s.source.str() + "->" + s.target.str() + " covers " +
                                                  format_date(s.period().first) + ".." + format_date(s.period().last));
        }
        if (s.source == s.target) continue;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (!(s.values[i] > 0)) continue;
            const Date day = s.start_date + std::chrono::days(static_cast<int>(i));
            auto [it, fresh] = daily.try_emplace(day);
            if (fresh) {
                it->second.layer = Layer::Public;
                it->second.day = day;
            }
            it->second.add_weight(s.source, s.target, s.values[i]);
        }
    }
    return daily;
}

AttentionNetwork aggregate(const DailyNetworks& daily, Layer layer) {
    AttentionNetwork agg;
    agg.layer = layer;
    for (const auto& [day, net] : daily) {
        agg.nodes.insert(net.nodes.begin(), net.nodes.end());
        for (const auto& [key, w] : net.edges) agg.edges[key] += w;
    }
    return agg;
}

double disparity_pvalue(double share, std::size_t degree) {
    if (degree < 2) return 1.0;
    return std::pow(1.0 - share, static_cast<double>(degree - 1));
}

AttentionNetwork disparity_backbone(const AttentionNetwork& n, const BackboneParams& p) {
    if (!(p.alpha > 0 && p.alpha <= 1)) throw Error(Errc::InvalidArgument, "alpha must lie in (0, 1]");
    const Digraph g = Digraph::from(n);
    const int size = g.size();
    std::vector<double> out_strength(size, 0.0), in_strength(size, 0.0);
    for (int u = 0; u < size; ++u) {
        for (const auto& a : g.out[u]) out_strength[u] += a.weight;
        for (const auto& a : g.in[u]) in_strength[u] += a.weight;
    }

    AttentionNetwork bb;
    bb.layer = n.layer;
    bb.day = n.day;
    for (int u = 0; u < size; ++u) {
        for (const auto& a : g.out[u]) {
            const int v = a.node;
            const double p_out = disparity_pvalue(a.weight / out_strength[u], g.out[u].size());
            const double p_in = disparity_pvalue(a.weight / in_strength[v], g.in[v].size());
            if (p_out < p.alpha || p_in < p.alpha) bb.add_weight(g.codes[u], g.codes[v], a.weight);
        }
    }
    return bb;
}

Digraph Digraph::from(const AttentionNetwork& n) {
    Digraph g;
    g.codes.assign(n.nodes.begin(), n.nodes.end());
    g.out.resize(g.codes.size());
    g.in.resize(g.codes.size());
    for (const auto& [key, w] : n.edges) {
        const int u = g.index_of(key.first);
        const int v = g.index_of(key.second);
        g.out[u].push_back({v, w});
        g.in[v].push_back({u, w});
    }
    return g;
}

Digraph Digraph::from_arcs(int n, const std::vector<std::pair<int, int>>& arcs) {
    Digraph g;
    for (int i = 0; i < n; ++i) g.codes.push_back(CountryCode::from_index(i));
    g.out.resize(n);
    g.in.resize(n);
    std::vector<std::pair<int, int>> sorted = arcs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto [u, v] : sorted) {
        if (u == v) continue;
        g.out[u].push_back({v, 1.0});
        g.in[v].push_back({u, 1.0});
    }
    for (auto& list : g.in) std::sort(list.begin(), list.end(), [](const Arc& a, const Arc& b) { return a.node < b.node; });
    return g;
}

std::size_t Digraph::arc_count() const {
    std::size_t m = 0;
    for (const auto& list : out) m += list.size();
    return m;
}

int Digraph::index_of(CountryCode c) const {
    auto it = std::lower_bound(codes.begin(), codes.end(), c);
    if (it == codes.end() || *it != c) return -1;
    return static_cast<int>(it - codes.begin());
}

AttentionNetwork Digraph::to_network(Layer layer) const {
    AttentionNetwork n;
    n.layer = layer;
    n.nodes.insert(codes.begin(), codes.end());
    for (int u = 0; u < size(); ++u) {
        for (const auto& a : out[u]) n.edges[{codes[u], codes[a.node]}] = a.weight;
    }
    return n;
}

void write_edge_list(std::ostream& out, const AttentionNetwork& n, bool header) {
    if (header) out << "layer,source,target,weight\n";
    for (const auto& [key, w] : n.edges) {
        out << layer_name(n.layer) << ',' << key.first.str() << ',' << key.second.str() << ',' << csv::fmt_real(w)
            << '\n';
    }
}

}  // namespace attnet
