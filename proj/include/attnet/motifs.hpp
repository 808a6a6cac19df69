#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "attnet/network.hpp"

namespace attnet {

/// The 13 connected directed triad classes in canonical order. FeedForward
/// (030T) is the 5th entry and the double feedback loop (030C) the 6th.
enum class TriadClass : int {
    T021D, T021U, T021C, T111D, T111U, T030T, T030C, T201, T120D, T120U, T120C, T210, T300
};

inline constexpr int kTriadClasses = 13;

std::string_view triad_name(TriadClass c) noexcept;

/// Classifies the induced subgraph on three nodes given its six possible arcs
/// (ab, ba, ac, ca, bc, cb). Returns nullopt for disconnected triads.
std::optional<TriadClass> classify_triad(bool ab, bool ba, bool ac, bool ca, bool bc, bool cb) noexcept;

struct TriadCensus {
    std::array<std::uint64_t, kTriadClasses> counts{};

    std::uint64_t operator[](TriadClass c) const { return counts[static_cast<int>(c)]; }
    bool operator==(const TriadCensus&) const = default;
};

/// Counts connected induced triads by merging sorted neighbourhoods, so
/// unconnected triples are never visited. Weights are ignored.
TriadCensus triad_census(const Digraph& g);
TriadCensus triad_census(const AttentionNetwork& n);

/// Double-edge swaps (a->b, c->d) => (a->d, c->b) that keep every node's in-
/// and out-degree. Swaps that would create a self-loop or duplicate arc are
/// rejected. `swaps_per_edge * m` swaps are attempted. Throws TooFewEdges
/// when the graph has fewer than two arcs.
Digraph randomize_degree_preserving(const Digraph& g, int swaps_per_edge, std::uint64_t seed);
AttentionNetwork randomize_degree_preserving(const AttentionNetwork& n, int swaps_per_edge, std::uint64_t seed);

struct MotifOptions {
    int ensemble_size = 1000;
    int swaps_per_edge = 10;
    std::uint64_t seed = 0;
    /// Worker threads; 0 means hardware concurrency. Does not affect results.
    int workers = 1;
};

struct MotifZScores {
    TriadCensus real;
    std::array<double, kTriadClasses> mean{};
    std::array<double, kTriadClasses> stddev{};
    /// nullopt when the ensemble has zero variance and the real count differs
    /// from its mean.
    std::array<std::optional<double>, kTriadClasses> z{};
    int ensemble_size = 0;
    std::uint64_t seed = 0;
};

/// Z-score of each class against an ensemble of randomized graphs. Sample i
/// is drawn with seed derive_seed(seed, i).
MotifZScores motif_zscores(const Digraph& g, const MotifOptions& opts);
MotifZScores motif_zscores(const AttentionNetwork& n, const MotifOptions& opts);

void write_motif_csv(std::ostream& out, const MotifZScores& z);

}  // namespace attnet
