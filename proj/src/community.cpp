#include "attnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "attnet/rng.hpp"

namespace attnet {

namespace {

double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

// Flow network at one aggregation level. Self-links are dropped since they
// never cross a module boundary.
struct FlowGraph {
    struct Link {
        int node;
        double flow;
    };
    std::vector<double> flow;
    std::vector<std::vector<Link>> out, in;
    std::vector<double> out_flow, in_flow;

    int size() const { return static_cast<int>(flow.size()); }

    void finish() {
        out_flow.assign(flow.size(), 0.0);
        in_flow.assign(flow.size(), 0.0);
        for (int u = 0; u < size(); ++u) {
            for (const auto& l : out[u]) {
                out_flow[u] += l.flow;
                in_flow[l.node] += l.flow;
            }
        }
    }
};

FlowGraph base_flow_graph(const Digraph& g, const VisitRates& v) {
    const auto flows = arc_flows(g, v);
    FlowGraph fg;
    fg.flow = v.rates;
    fg.out.resize(g.size());
    fg.in.resize(g.size());
    for (int u = 0; u < g.size(); ++u) {
        for (std::size_t k = 0; k < g.out[u].size(); ++k) {
            const int t = g.out[u][k].node;
            fg.out[u].push_back({t, flows[u][k]});
            fg.in[t].push_back({u, flows[u][k]});
        }
    }
    fg.finish();
    return fg;
}

FlowGraph coarsen(const FlowGraph& fg, const std::vector<int>& module, int modules) {
    FlowGraph c;
    c.flow.assign(modules, 0.0);
    c.out.resize(modules);
    c.in.resize(modules);
    std::map<std::pair<int, int>, double> links;
    for (int u = 0; u < fg.size(); ++u) {
        c.flow[module[u]] += fg.flow[u];
        for (const auto& l : fg.out[u]) {
            const int a = module[u], b = module[l.node];
            if (a != b) links[{a, b}] += l.flow;
        }
    }
    for (const auto& [key, f] : links) {
        c.out[key.first].push_back({key.second, f});
        c.in[key.second].push_back({key.first, f});
    }
    c.finish();
    return c;
}

// Module bookkeeping for greedy moves on one FlowGraph.
class MapState {
public:
    MapState(const FlowGraph& fg, std::vector<int> module, double node_entropy_term)
        : fg_(fg), module_(std::move(module)), node_term_(node_entropy_term) {
        const int n = fg.size();
        enter_.assign(n, 0.0);
        exit_.assign(n, 0.0);
        flow_.assign(n, 0.0);
        for (int u = 0; u < n; ++u) {
            flow_[module_[u]] += fg.flow[u];
            for (const auto& l : fg.out[u]) {
                if (module_[l.node] != module_[u]) {
                    exit_[module_[u]] += l.flow;
                    enter_[module_[l.node]] += l.flow;
                }
            }
        }
        for (double e : enter_) total_enter_ += e;
        for (int m = 0; m < n; ++m) {
            sum_enter_ += plogp(enter_[m]);
            sum_exit_ += plogp(exit_[m]);
            sum_exit_flow_ += plogp(exit_[m] + flow_[m]);
        }
    }

    double codelength() const { return plogp(total_enter_) - sum_enter_ - sum_exit_ - node_term_ + sum_exit_flow_; }
    const std::vector<int>& module() const { return module_; }

    struct Move {
        int target = -1;
        double delta = 0.0;
        double enter_a, exit_a, enter_b, exit_b;
    };

    // Best move of node k to a module of one of its neighbours.
    Move best_move(int k) {
        const int a = module_[k];
        scratch_.clear();
        double to_a = 0.0, from_a = 0.0;
        for (const auto& l : fg_.out[k]) {
            const int m = module_[l.node];
            if (m == a) to_a += l.flow;
            else scratch_[m].first += l.flow;
        }
        for (const auto& l : fg_.in[k]) {
            const int m = module_[l.node];
            if (m == a) from_a += l.flow;
            else scratch_[m].second += l.flow;
        }
        const double out_k = fg_.out_flow[k], in_k = fg_.in_flow[k], flow_k = fg_.flow[k];
        const double exit_a = exit_[a] - (out_k - to_a) + from_a;
        const double enter_a = enter_[a] - (in_k - from_a) + to_a;
        const double flow_a = flow_[a] - flow_k;

        Move best;
        const double current = codelength();
        for (const auto& [b, f] : scratch_) {
            const double to_b = f.first, from_b = f.second;
            const double exit_b = exit_[b] + out_k - to_b - from_b;
            const double enter_b = enter_[b] + in_k - from_b - to_b;
            const double flow_b = flow_[b] + flow_k;
            const double total = total_enter_ - enter_[a] - enter_[b] + enter_a + enter_b;
            const double se = sum_enter_ - plogp(enter_[a]) - plogp(enter_[b]) + plogp(enter_a) + plogp(enter_b);
            const double sx = sum_exit_ - plogp(exit_[a]) - plogp(exit_[b]) + plogp(exit_a) + plogp(exit_b);
            const double sxf = sum_exit_flow_ - plogp(exit_[a] + flow_[a]) - plogp(exit_[b] + flow_[b]) +
                               plogp(exit_a + flow_a) + plogp(exit_b + flow_b);
            const double delta = (plogp(total) - se - sx - node_term_ + sxf) - current;
            // scratch_ iterates in ascending module id, so strict < keeps the
            // lowest id among equal gains.
            if (delta < best.delta) best = {b, delta, enter_a, exit_a, enter_b, exit_b};
        }
        return best;
    }

    void apply(int k, const Move& mv) {
        const int a = module_[k], b = mv.target;
        const double flow_k = fg_.flow[k];
        total_enter_ += mv.enter_a + mv.enter_b - enter_[a] - enter_[b];
        sum_enter_ += plogp(mv.enter_a) + plogp(mv.enter_b) - plogp(enter_[a]) - plogp(enter_[b]);
        sum_exit_ += plogp(mv.exit_a) + plogp(mv.exit_b) - plogp(exit_[a]) - plogp(exit_[b]);
        sum_exit_flow_ -= plogp(exit_[a] + flow_[a]) + plogp(exit_[b] + flow_[b]);
        enter_[a] = mv.enter_a;
        exit_[a] = mv.exit_a;
        enter_[b] = mv.enter_b;
        exit_[b] = mv.exit_b;
        flow_[a] -= flow_k;
        flow_[b] += flow_k;
        sum_exit_flow_ += plogp(exit_[a] + flow_[a]) + plogp(exit_[b] + flow_[b]);
        module_[k] = b;
    }

private:
    const FlowGraph& fg_;
    std::vector<int> module_;
    double node_term_;
    std::vector<double> enter_, exit_, flow_;
    double total_enter_ = 0.0, sum_enter_ = 0.0, sum_exit_ = 0.0, sum_exit_flow_ = 0.0;
    std::map<int, std::pair<double, double>> scratch_;
};

constexpr double kMinGain = 1e-12;

// Sweeps until no node can lower the codelength by more than kMinGain.
// Returns the number of moves made.
int local_moves(const FlowGraph& fg, std::vector<int>& module, double node_term, Rng& rng,
                std::vector<double>* trace) {
    MapState state(fg, module, node_term);
    std::vector<int> order(fg.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    int moves = 0;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int k : order) {
            const auto mv = state.best_move(k);
            if (mv.target < 0 || !(mv.delta < -kMinGain)) continue;
            state.apply(k, mv);
            if (trace) trace->push_back(state.codelength());
            moved = true;
            ++moves;
        }
    }
    module = state.module();
    return moves;
}

int densify(std::vector<int>& module) {
    std::map<int, int> ids;
    for (int& m : module) {
        auto [it, fresh] = ids.try_emplace(m, static_cast<int>(ids.size()));
        m = it->second;
    }
    return static_cast<int>(ids.size());
}

double node_entropy_term(const VisitRates& v) {
    double t = 0.0;
    for (double r : v.rates) t += plogp(r);
    return t;
}

Partition search_once(const Digraph& g, const VisitRates& v, std::uint64_t seed, std::vector<double>* trace) {
    const FlowGraph base = base_flow_graph(g, v);
    const double node_term = node_entropy_term(v);
    Rng rng(seed);

    std::vector<int> assign(g.size());
    std::iota(assign.begin(), assign.end(), 0);
    double best = map_equation(g, v, assign);

    for (int round = 0; round < 100; ++round) {
        local_moves(base, assign, node_term, rng, trace);
        int modules = densify(assign);
        while (modules > 1) {
            const FlowGraph coarse = coarsen(base, assign, modules);
            std::vector<int> coarse_assign(modules);
            std::iota(coarse_assign.begin(), coarse_assign.end(), 0);
            if (local_moves(coarse, coarse_assign, node_term, rng, trace) == 0) break;
            for (int& m : assign) m = coarse_assign[m];
            modules = densify(assign);
        }
        const double length = map_equation(g, v, assign);
        if (!(length < best - kMinGain)) break;
        best = length;
    }
    return {canonical_modules(assign), map_equation(g, v, assign)};
}

}  // namespace

VisitRates visit_rates(const Digraph& g, double teleport, double tol) {
    const int n = g.size();
    if (n == 0) throw Error(Errc::InvalidArgument, "visit rates of an empty graph");
    if (!(teleport > 0 && teleport < 1)) throw Error(Errc::InvalidArgument, "teleport must lie in (0, 1)");
    std::vector<double> strength(n, 0.0);
    for (int u = 0; u < n; ++u) {
        for (const auto& a : g.out[u]) strength[u] += a.weight;
    }
    std::vector<double> rate(n, 1.0 / n), next(n);
    for (int iter = 0; iter < 10000; ++iter) {
        double jump = 0.0;
        for (int u = 0; u < n; ++u) jump += strength[u] > 0 ? teleport * rate[u] : rate[u];
        std::fill(next.begin(), next.end(), jump / n);
        for (int u = 0; u < n; ++u) {
            if (strength[u] <= 0) continue;
            const double share = (1.0 - teleport) * rate[u] / strength[u];
            for (const auto& a : g.out[u]) next[a.node] += share * a.weight;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (int u = 0; u < n; ++u) {
            next[u] /= total;
            change += std::abs(next[u] - rate[u]);
        }
        rate.swap(next);
        if (change < tol) return {rate, teleport};
    }
    throw Error(Errc::NonConvergence, "visit rates did not converge in 10000 iterations");
}

std::vector<std::vector<double>> arc_flows(const Digraph& g, const VisitRates& v) {
    std::vector<std::vector<double>> flows(g.size());
    for (int u = 0; u < g.size(); ++u) {
        double strength = 0.0;
        for (const auto& a : g.out[u]) strength += a.weight;
        for (const auto& a : g.out[u]) flows[u].push_back((1.0 - v.teleport) * v.rates[u] * a.weight / strength);
    }
    return flows;
}

int Partition::module_count() const {
    return module.empty() ? 0 : *std::max_element(module.begin(), module.end()) + 1;
}

std::vector<int> canonical_modules(const std::vector<int>& module) {
    std::vector<int> out = module;
    densify(out);
    return out;
}

double map_equation(const Digraph& g, const VisitRates& v, const std::vector<int>& module) {
    if (module.size() != static_cast<std::size_t>(g.size()) || v.rates.size() != module.size()) {
        throw Error(Errc::IncompletePartition, "partition covers " + std::to_string(module.size()) + " of " +
                                                   std::to_string(g.size()) + " nodes");
    }
    for (int m : module) {
        if (m < 0) throw Error(Errc::IncompletePartition, "negative module id");
    }
    const auto flows = arc_flows(g, v);
    std::map<int, double> enter, exit, flow;
    for (int u = 0; u < g.size(); ++u) {
        flow[module[u]] += v.rates[u];
        for (std::size_t k = 0; k < g.out[u].size(); ++k) {
            const int t = g.out[u][k].node;
            if (module[t] != module[u]) {
                exit[module[u]] += flows[u][k];
                enter[module[t]] += flows[u][k];
            }
        }
    }
    double q = 0.0;
    for (const auto& [m, e] : enter) q += e;
    double length = plogp(q);
    for (const auto& [m, e] : enter) length -= plogp(e);
    for (const auto& [m, f] : flow) {
        const double x = exit.contains(m) ? exit[m] : 0.0;
        length += plogp(x + f) - plogp(x);
    }
    for (double r : v.rates) length -= plogp(r);
    return std::max(0.0, length);
}

Partition detect_communities(const Digraph& g, const CommunityOptions& opts) {
    if (g.size() == 0) throw Error(Errc::InvalidArgument, "community detection on an empty graph");
    const VisitRates v = visit_rates(g, opts.teleport);
    std::vector<int> one(g.size(), 0);
    Partition best{one, map_equation(g, v, one)};
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        auto p = search_once(g, v, derive_seed(opts.seed, static_cast<std::uint64_t>(r)), opts.move_trace);
        if (p.codelength < best.codelength - kMinGain) best = std::move(p);
    }
    return best;
}

Partition detect_communities(const AttentionNetwork& n, const CommunityOptions& opts) {
    return detect_communities(Digraph::from(n), opts);
}

void write_partition_csv(std::ostream& out, const Digraph& g, const Partition& p) {
    out << "node,module\n";
    for (int u = 0; u < g.size(); ++u) out << g.codes[u].str() << ',' << p.module[u] << '\n';
}

}  // namespace attnet
