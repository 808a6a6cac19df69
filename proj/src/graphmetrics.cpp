#include "attnet/graphmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

namespace attnet {

std::string_view measure_name(Measure m) noexcept {
    switch (m) {
        case Measure::Degree: return "degree";
        case Measure::Betweenness: return "betweenness";
        case Measure::Eigenvector: return "eigenvector";
        case Measure::Closeness: return "closeness";
    }
    return "?";
}

std::string_view direction_name(Direction d) noexcept {
    switch (d) {
        case Direction::In: return "in";
        case Direction::Out: return "out";
        case Direction::Total: return "total";
    }
    return "?";
}

namespace {

std::vector<std::vector<int>> neighbor_lists(const Digraph& g, Direction dir) {
    std::vector<std::vector<int>> adj(g.size());
    for (int u = 0; u < g.size(); ++u) {
        if (dir != Direction::In) {
            for (const auto& a : g.out[u]) adj[u].push_back(a.node);
        }
        if (dir != Direction::Out) {
            for (const auto& a : g.in[u]) adj[u].push_back(a.node);
        }
        std::sort(adj[u].begin(), adj[u].end());
        adj[u].erase(std::unique(adj[u].begin(), adj[u].end()), adj[u].end());
    }
    return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

std::vector<double> degree_values(const Digraph& g, const CentralityOptions& opts) {
    std::vector<double> out(g.size(), 0.0);
    for (int u = 0; u < g.size(); ++u) {
        if (opts.direction != Direction::In) {
            for (const auto& a : g.out[u]) out[u] += opts.weighted ? a.weight : 1.0;
        }
        if (opts.direction != Direction::Out) {
            for (const auto& a : g.in[u]) out[u] += opts.weighted ? a.weight : 1.0;
        }
    }
    return out;
}

std::vector<double> betweenness_values(const Digraph& g) {
    const int n = g.size();
    std::vector<double> bc(n, 0.0);
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> preds(n);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        stack.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            stack.push_back(v);
            for (const auto& a : g.out[v]) {
                const int w = a.node;
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        while (!stack.empty()) {
            const int w = stack.back();
            stack.pop_back();
            for (int v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    return bc;
}

std::vector<double> harmonic_values(const Digraph& g, Direction dir) {
    const auto adj = neighbor_lists(g, dir);
    std::vector<double> out(g.size(), 0.0);
    for (int u = 0; u < g.size(); ++u) {
        const auto dist = bfs_distances(adj, u);
        for (int v = 0; v < g.size(); ++v) {
            if (v != u && dist[v] > 0) out[u] += 1.0 / dist[v];
        }
    }
    return out;
}

std::vector<double> eigenvector_values(const Digraph& g, bool weighted) {
    const int n = g.size();
    double max_w = 0.0;
    for (const auto& list : g.out) {
        for (const auto& a : list) max_w = std::max(max_w, weighted ? a.weight : 1.0);
    }
    if (max_w == 0.0) max_w = 1.0;
    constexpr double restart = 1e-6;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), next(n);
    // Iterating on (A^T + I) shares A^T's principal eigenvector and removes
    // the oscillation of periodic graphs.
    for (int iter = 0; iter < 100000; ++iter) {
        double mass = 0.0;
        for (double v : x) mass += v;
        std::fill(next.begin(), next.end(), restart * mass / n);
        for (int u = 0; u < n; ++u) {
            next[u] += x[u];
            for (const auto& a : g.out[u]) next[a.node] += x[u] * (weighted ? a.weight : 1.0) / max_w;
        }
        double norm = 0.0;
        for (double v : next) norm += v * v;
        norm = std::sqrt(norm);
        double change = 0.0;
        for (int u = 0; u < n; ++u) {
            next[u] /= norm;
            change += std::abs(next[u] - x[u]);
        }
        x.swap(next);
        if (change < 1e-13) break;
    }
    return x;
}

}  // namespace

CentralityVector centralities(const AttentionNetwork& n, Measure measure, const CentralityOptions& opts) {
    if (n.nodes.empty()) throw Error(Errc::EmptyNetwork, "centrality of an empty network");
    const Digraph g = Digraph::from(n);
    std::vector<double> values;
    switch (measure) {
        case Measure::Degree: values = degree_values(g, opts); break;
        case Measure::Betweenness: values = betweenness_values(g); break;
        case Measure::Closeness: values = harmonic_values(g, opts.direction); break;
        case Measure::Eigenvector: values = eigenvector_values(g, opts.weighted); break;
    }
    CentralityVector cv;
    cv.measure = measure;
    for (int u = 0; u < g.size(); ++u) cv.values.emplace(g.codes[u], values[u]);
    return cv;
}

std::vector<CountryCode> topk_neighbors(const AttentionNetwork& n, CountryCode node, std::size_t k) {
    if (!n.nodes.contains(node)) throw Error(Errc::UnknownNode, node.str());
    std::vector<std::pair<double, CountryCode>> nbrs;
    for (auto it = n.edges.lower_bound({node, CountryCode("AA")}); it != n.edges.end() && it->first.first == node; ++it) {
        nbrs.emplace_back(it->second, it->first.second);
    }
    std::sort(nbrs.begin(), nbrs.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<CountryCode> out;
    for (std::size_t i = 0; i < std::min(k, nbrs.size()); ++i) out.push_back(nbrs[i].second);
    return out;
}

double jaccard_topk(std::vector<CountryCode> a, std::vector<CountryCode> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (a.empty() && b.empty()) return 0.0;
    std::vector<CountryCode> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    const double inter = static_cast<double>(both.size());
    return inter / (static_cast<double>(a.size() + b.size()) - inter);
}

double gini_out_weights(const AttentionNetwork& n, CountryCode node) {
    if (!n.nodes.contains(node)) throw Error(Errc::UnknownNode, node.str());
    std::vector<double> w;
    for (auto it = n.edges.lower_bound({node, CountryCode("AA")}); it != n.edges.end() && it->first.first == node; ++it) {
        w.push_back(it->second);
    }
    if (w.empty()) throw Error(Errc::NoOutEdges, node.str());
    return stats::gini(w);
}

std::vector<int> strongly_connected_sizes(const Digraph& g) {
    const int n = g.size();
    std::vector<int> index(n, -1), low(n, 0), sizes;
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0;
    // Iterative Tarjan: frames of (node, next arc position).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < g.out[v].size()) {
                const int w = g.out[v][pos++].node;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const int done = v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            if (low[done] == index[done]) {
                int size = 0;
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    ++size;
                    if (w == done) break;
                }
                sizes.push_back(size);
            }
        }
    }
    return sizes;
}

NetworkSummary network_summary(const AttentionNetwork& n) {
    NetworkSummary s;
    s.n_nodes = n.node_count();
    s.n_links = n.edge_count();
    if (s.n_nodes == 0) return s;
    s.mean_degree = static_cast<double>(s.n_links) / static_cast<double>(s.n_nodes);

    const Digraph g = Digraph::from(n);
    const auto sccs = strongly_connected_sizes(g);
    s.scc_fraction = static_cast<double>(*std::max_element(sccs.begin(), sccs.end())) / static_cast<double>(s.n_nodes);

    // Reciprocal undirected graph.
    std::vector<std::vector<int>> und(g.size());
    std::size_t reciprocated = 0;
    for (int u = 0; u < g.size(); ++u) {
        for (const auto& a : g.out[u]) {
            if (n.has_edge(g.codes[a.node], g.codes[u])) {
                ++reciprocated;
                und[u].push_back(a.node);
            }
        }
    }
    if (s.n_links > 0) s.reciprocity = static_cast<double>(reciprocated) / static_cast<double>(s.n_links);
    if (reciprocated == 0) return s;

    std::vector<std::set<int>> nbr(g.size());
    for (int u = 0; u < g.size(); ++u) nbr[u].insert(und[u].begin(), und[u].end());

    double cc_sum = 0.0;
    int cc_nodes = 0;
    for (int u = 0; u < g.size(); ++u) {
        const auto& nu = nbr[u];
        if (nu.empty()) continue;
        ++cc_nodes;
        if (nu.size() < 2) continue;
        std::size_t links = 0;
        for (int v : nu) {
            for (int w : nbr[v]) {
                if (w > v && nu.contains(w)) ++links;
            }
        }
        const double k = static_cast<double>(nu.size());
        cc_sum += 2.0 * static_cast<double>(links) / (k * (k - 1.0));
    }
    s.clustering = cc_sum / cc_nodes;

    double sx = 0, sxx = 0, sxy = 0, m = 0;
    for (int u = 0; u < g.size(); ++u) {
        for (int v : nbr[u]) {
            const double du = static_cast<double>(nbr[u].size()), dv = static_cast<double>(nbr[v].size());
            sx += du;
            sxx += du * du;
            sxy += du * dv;
            m += 1.0;
        }
    }
    const double mean = sx / m;
    const double var = sxx / m - mean * mean;
    if (var > 1e-12 * std::max(1.0, mean * mean)) s.assortativity = (sxy / m - mean * mean) / var;
    return s;
}

stats::TestResult spearman_centrality_alignment(const AttentionNetwork& media, const AttentionNetwork& public_,
                                                Measure measure, const CentralityOptions& opts) {
    std::vector<CountryCode> shared;
    std::set_intersection(media.nodes.begin(), media.nodes.end(), public_.nodes.begin(), public_.nodes.end(),
                          std::back_inserter(shared));
    if (shared.size() < 3) {
        throw Error(Errc::InsufficientNodes, std::to_string(shared.size()) + " shared nodes, need at least 3");
    }
    const auto cm = centralities(media, measure, opts);
    const auto cp = centralities(public_, measure, opts);
    std::vector<double> x, y;
    for (const auto& c : shared) {
        x.push_back(cm.values.at(c));
        y.push_back(cp.values.at(c));
    }
    return stats::spearman(x, y);
}

}  // namespace attnet
