#include "attnet/motifs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "attnet/rng.hpp"
#include "csv.hpp"

namespace attnet {

std::string_view triad_name(TriadClass c) noexcept {
    static constexpr std::array<std::string_view, kTriadClasses> names = {
        "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D", "120U", "120C", "210", "300"};
    return names[static_cast<int>(c)];
}

std::optional<TriadClass> classify_triad(bool ab, bool ba, bool ac, bool ca, bool bc, bool cb) noexcept {
    const bool m[3][3] = {{false, ab, ac}, {ba, false, bc}, {ca, cb, false}};
    int mutual = 0, asym = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (m[i][j] && m[j][i]) ++mutual;
            else if (m[i][j] || m[j][i]) ++asym;
        }
    }
    if (mutual + asym < 2) return std::nullopt;

    auto outdeg = [&](int i) { return int(m[i][0]) + int(m[i][1]) + int(m[i][2]); };
    auto indeg = [&](int i) { return int(m[0][i]) + int(m[1][i]) + int(m[2][i]); };

    if (mutual == 0 && asym == 2) {
        for (int x = 0; x < 3; ++x) {
            if (outdeg(x) == 2) return TriadClass::T021D;
            if (indeg(x) == 2) return TriadClass::T021U;
        }
        return TriadClass::T021C;
    }
    if (mutual == 0 && asym == 3) {
        for (int x = 0; x < 3; ++x) {
            if (outdeg(x) != 1) return TriadClass::T030T;
        }
        return TriadClass::T030C;
    }
    if (mutual == 2 && asym == 0) return TriadClass::T201;
    if (mutual == 2 && asym == 1) return TriadClass::T210;
    if (mutual == 3) return TriadClass::T300;

    // One mutual dyad (p,q); r is the third node.
    int p = 0, q = 1;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (m[i][j] && m[j][i]) p = i, q = j;
        }
    }
    const int r = 3 - p - q;
    const int r_out = int(m[r][p]) + int(m[r][q]);
    const int r_in = int(m[p][r]) + int(m[q][r]);
    if (asym == 1) return r_out == 1 ? TriadClass::T111D : TriadClass::T111U;
    if (r_out == 2) return TriadClass::T120D;
    if (r_in == 2) return TriadClass::T120U;
    return TriadClass::T120C;
}

namespace {

class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}
    bool operator()(int u, int v) const { return bits_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    void set(int u, int v, bool on) { bits_[static_cast<std::size_t>(u) * n_ + v] = on ? 1 : 0; }

private:
    int n_;
    std::vector<std::uint8_t> bits_;
};

}  // namespace

TriadCensus triad_census(const Digraph& g) {
    const int n = g.size();
    AdjacencyMatrix adj(n);
    std::vector<std::vector<int>> nbr(n);
    for (int u = 0; u < n; ++u) {
        for (const auto& a : g.out[u]) {
            adj.set(u, a.node, true);
            nbr[u].push_back(a.node);
            nbr[a.node].push_back(u);
        }
    }
    for (auto& list : nbr) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    TriadCensus census;
    std::vector<int> merged;
    for (int v = 0; v < n; ++v) {
        for (int u : nbr[v]) {
            if (u <= v) continue;
            merged.clear();
            std::set_union(nbr[v].begin(), nbr[v].end(), nbr[u].begin(), nbr[u].end(), std::back_inserter(merged));
            for (int w : merged) {
                if (w == u || w == v) continue;
                // Each connected triple is counted once: from its smallest
                // node v and, when v is adjacent to both others, the middle u.
                const bool count = u < w || (v < w && w < u && !adj(v, w) && !adj(w, v));
                if (!count) continue;
                const auto cls = classify_triad(adj(v, u), adj(u, v), adj(v, w), adj(w, v), adj(u, w), adj(w, u));
                if (cls) ++census.counts[static_cast<int>(*cls)];
            }
        }
    }
    return census;
}

TriadCensus triad_census(const AttentionNetwork& n) { return triad_census(Digraph::from(n)); }

Digraph randomize_degree_preserving(const Digraph& g, int swaps_per_edge, std::uint64_t seed) {
    std::vector<std::pair<int, int>> arcs;
    std::vector<double> weights;
    for (int u = 0; u < g.size(); ++u) {
        for (const auto& a : g.out[u]) {
            arcs.emplace_back(u, a.node);
            weights.push_back(a.weight);
        }
    }
    if (arcs.size() < 2) throw Error(Errc::TooFewEdges, std::to_string(arcs.size()) + " arcs, need at least 2");
    if (swaps_per_edge < 0) throw Error(Errc::InvalidArgument, "swaps_per_edge must be >= 0");

    AdjacencyMatrix adj(g.size());
    for (auto [u, v] : arcs) adj.set(u, v, true);

    Rng rng(seed);
    const std::uint64_t m = arcs.size();
    const std::uint64_t attempts = static_cast<std::uint64_t>(swaps_per_edge) * m;
    for (std::uint64_t t = 0; t < attempts; ++t) {
        const auto i = rng.below(m);
        const auto j = rng.below(m);
        if (i == j) continue;
        const auto [a, b] = arcs[i];
        const auto [c, d] = arcs[j];
        if (a == c || b == d) continue;  // swap would be the identity
        if (a == d || c == b) continue;  // self-loop
        if (adj(a, d) || adj(c, b)) continue;  // duplicate arc
        adj.set(a, b, false);
        adj.set(c, d, false);
        adj.set(a, d, true);
        adj.set(c, b, true);
        arcs[i] = {a, d};
        arcs[j] = {c, b};
    }

    // Weights travel with the source's arc slot.
    Digraph out;
    out.codes = g.codes;
    out.out.resize(g.size());
    out.in.resize(g.size());
    std::vector<std::size_t> order(arcs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return arcs[x] < arcs[y]; });
    for (auto k : order) {
        const auto [u, v] = arcs[k];
        out.out[u].push_back({v, weights[k]});
        out.in[v].push_back({u, weights[k]});
    }
    for (auto& list : out.in) {
        std::sort(list.begin(), list.end(), [](const Digraph::Arc& x, const Digraph::Arc& y) { return x.node < y.node; });
    }
    return out;
}

AttentionNetwork randomize_degree_preserving(const AttentionNetwork& n, int swaps_per_edge, std::uint64_t seed) {
    auto out = randomize_degree_preserving(Digraph::from(n), swaps_per_edge, seed).to_network(n.layer);
    out.day = n.day;
    return out;
}

MotifZScores motif_zscores(const Digraph& g, const MotifOptions& opts) {
    if (opts.ensemble_size < 2) throw Error(Errc::InvalidArgument, "ensemble_size must be >= 2");
    if (g.arc_count() < 2) throw Error(Errc::TooFewEdges, "motif null model needs at least 2 arcs");

    MotifZScores result;
    result.real = triad_census(g);
    result.ensemble_size = opts.ensemble_size;
    result.seed = opts.seed;

    const auto samples = static_cast<std::size_t>(opts.ensemble_size);
    std::vector<TriadCensus> censuses(samples);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < samples; i += stride) {
            const auto rnd = randomize_degree_preserving(g, opts.swaps_per_edge, derive_seed(opts.seed, i));
            censuses[i] = triad_census(rnd);
        }
    };
    std::size_t workers = opts.workers > 0 ? static_cast<std::size_t>(opts.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, samples);
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }

    const double e = static_cast<double>(samples);
    for (int c = 0; c < kTriadClasses; ++c) {
        std::uint64_t sum = 0;
        for (const auto& cs : censuses) sum += cs.counts[c];
        const double mean = static_cast<double>(sum) / e;
        double ss = 0.0;
        for (const auto& cs : censuses) {
            const double d = static_cast<double>(cs.counts[c]) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (e - 1.0));
        const double real = static_cast<double>(result.real.counts[c]);
        result.mean[c] = mean;
        result.stddev[c] = sd;
        if (sd > 0) result.z[c] = (real - mean) / sd;
        else if (real == mean) result.z[c] = 0.0;
        else result.z[c] = std::nullopt;
    }
    return result;
}

MotifZScores motif_zscores(const AttentionNetwork& n, const MotifOptions& opts) {
    return motif_zscores(Digraph::from(n), opts);
}

void write_motif_csv(std::ostream& out, const MotifZScores& z) {
    out << "class,count_real,mean_rand,std_rand,z\n";
    for (int c = 0; c < kTriadClasses; ++c) {
        out << triad_name(static_cast<TriadClass>(c)) << ',' << z.real.counts[c] << ',' << csv::fmt_real(z.mean[c])
            << ',' << csv::fmt_real(z.stddev[c]) << ',' << (z.z[c] ? csv::fmt_real(*z.z[c]) : std::string("undefined"))
            << '\n';
    }
}

}  // namespace attnet
