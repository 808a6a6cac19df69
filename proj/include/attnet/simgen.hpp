#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "attnet/causality.hpp"
#include "attnet/ingest.hpp"
#include "attnet/network.hpp"

namespace attnet {

struct CountrySpec {
    CountryCode code;
    Region region = Region::Europe;
};

/// Planted Granger coupling inside one ordered pair: with MediaToPublic the
/// pair's public series receives coefficient * media[t - lag], and vice versa.
struct Coupling {
    CountryCode source;
    CountryCode target;
    GrangerDirection direction = GrangerDirection::MediaToPublic;
    int lag = 1;
    double coefficient = 0.0;
};

struct WorldSpec {
    std::vector<CountrySpec> countries;
    Date start = Period::collection_default().first;
    int period_days = 404;
    /// Module id per country, parallel to `countries`. Empty means one module.
    std::vector<int> planted_communities;
    std::vector<Coupling> planted_couplings;
    double noise_sigma = 1.0;
    double ar_coefficient = 0.5;
    std::uint64_t seed = 0;
};

/// Throws InvalidSpec describing the first violated constraint.
void validate(const WorldSpec& spec);

struct CoupledSeries {
    std::map<EdgeKey, std::vector<double>> media;
    std::map<EdgeKey, std::vector<double>> public_;
};

/// AR(1) base process per (pair, layer) with Gaussian-like innovations and
/// the planted couplings added in. Pair (i, j) uses stream
/// derive_seed(seed, i * n + j), so output does not depend on pair order of
/// evaluation.
CoupledSeries gen_coupled_series(const WorldSpec& spec);

struct WeightLaw {
    enum class Kind { Constant, Uniform } kind = Kind::Constant;
    double low = 1.0;
    double high = 1.0;
};

/// Directed block model over the world's countries: arc probability p_in
/// inside a planted module and p_out across. Requires 0 <= p_out < p_in <= 1,
/// or p_out == p_in for the structureless null case.
AttentionNetwork gen_planted_network(const WorldSpec& spec, double p_in, double p_out, const WeightLaw& law = {},
                                     Layer layer = Layer::Media);

/// Writes events.csv, trends.csv, regions.csv, embeddings.txt and truth.json
/// under `dir`, in the formats the loaders read. Media counts are
/// round(base + 5 * media) with base 30 inside a planted module and 8 across;
/// public volumes are base + 5 * public with base 45 / 20, split into two
/// windows that share their middle day and normalized to 0..100 per window
/// and source. Sources equal to `reference` get no trends windows.
void write_fixture(const WorldSpec& spec, const std::filesystem::path& dir, CountryCode reference = CountryCode("US"));

/// The six-country world bundled under data/fixture.
WorldSpec bundled_fixture_spec();

}  // namespace attnet
