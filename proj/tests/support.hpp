#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "attnet/core.hpp"
#include "attnet/network.hpp"
#include "oracles/oracles.hpp"

namespace support {

inline attnet::CountryCode code(int i) { return attnet::CountryCode::from_index(i); }

/// Random simple digraph with arc probability p.
inline oracle::Adj random_adj(std::mt19937_64& rng, int n, double p) {
    std::bernoulli_distribution arc(p);
    oracle::Adj a(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = i != j && arc(rng);
    return a;
}

inline oracle::WAdj random_weights(std::mt19937_64& rng, int n, double p, double lo = 1.0, double hi = 100.0) {
    std::bernoulli_distribution arc(p);
    std::uniform_real_distribution<double> w(lo, hi);
    oracle::WAdj a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j && arc(rng)) a[i][j] = w(rng);
        }
    return a;
}

/// Nodes are code(0..n-1), all present even when isolated.
inline attnet::AttentionNetwork to_network(const oracle::WAdj& w, attnet::Layer layer = attnet::Layer::Media) {
    attnet::AttentionNetwork net;
    net.layer = layer;
    for (int i = 0; i < static_cast<int>(w.size()); ++i) net.nodes.insert(code(i));
    for (int i = 0; i < static_cast<int>(w.size()); ++i)
        for (int j = 0; j < static_cast<int>(w.size()); ++j) {
            if (w[i][j] > 0) net.add_weight(code(i), code(j), w[i][j]);
        }
    return net;
}

inline attnet::AttentionNetwork to_network(const oracle::Adj& a) {
    oracle::WAdj w(a.size(), std::vector<double>(a.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) w[i][j] = a[i][j] ? 1.0 : 0.0;
    return to_network(w);
}

inline attnet::AttentionNetwork from_arcs(std::initializer_list<std::pair<const char*, const char*>> arcs,
                                          double weight = 1.0) {
    attnet::AttentionNetwork net;
    for (const auto& [s, t] : arcs) {
        net.nodes.insert(attnet::CountryCode(s));
        net.nodes.insert(attnet::CountryCode(t));
        net.add_weight(attnet::CountryCode(s), attnet::CountryCode(t), weight);
    }
    return net;
}

inline std::filesystem::path source_dir() {
    if (const char* env = std::getenv("ATTNET_SOURCE_DIR")) return env;
    return std::filesystem::path(__FILE__).parent_path().parent_path();
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("attnet_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace support
