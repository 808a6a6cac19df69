#include "attnet/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "attnet/rng.hpp"
#include "attnet/topics.hpp"
#include "csv.hpp"
#include "json.hpp"

namespace attnet {

namespace {

int country_slot(const WorldSpec& spec, CountryCode c) {
    for (std::size_t i = 0; i < spec.countries.size(); ++i) {
        if (spec.countries[i].code == c) return static_cast<int>(i);
    }
    return -1;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::InvalidSpec, what); }

// Vocabulary of the synthetic embedding; each word sits near its topic axis.
const std::map<Topic, std::vector<std::string>>& topic_vocabulary() {
    static const std::map<Topic, std::vector<std::string>> vocab = {
        {Topic::World, {"summit", "embassy", "treaty"}},
        {Topic::Politics, {"election", "parliament", "referendum"}},
        {Topic::Business, {"market", "trade", "tariff"}},
        {Topic::Tech, {"software", "startup", "smartphone"}},
        {Topic::Science, {"research", "physics", "satellite"}},
        {Topic::Health, {"vaccine", "hospital", "epidemic"}},
        {Topic::Sports, {"football", "olympics", "tournament"}},
        {Topic::Arts, {"museum", "film", "festival"}},
        {Topic::Style, {"fashion", "designer", "runway"}},
        {Topic::Food, {"cuisine", "restaurant", "wine"}},
        {Topic::Travel, {"visa", "tourism", "airline"}},
    };
    return vocab;
}

constexpr std::size_t kEmbeddingDim = 12;

bool same_module(const WorldSpec& spec, int i, int j) {
    return spec.planted_communities.empty() || spec.planted_communities[i] == spec.planted_communities[j];
}

double media_base(const WorldSpec& spec, int i, int j) { return same_module(spec, i, j) ? 30.0 : 8.0; }
double public_base(const WorldSpec& spec, int i, int j) { return same_module(spec, i, j) ? 45.0 : 20.0; }

}  // namespace

void validate(const WorldSpec& spec) {
    if (spec.countries.empty()) invalid("no countries");
    if (spec.period_days < 1) invalid("period_days must be positive");
    if (!(spec.noise_sigma >= 0)) invalid("noise_sigma must be non-negative");
    if (!(std::abs(spec.ar_coefficient) < 1)) invalid("ar_coefficient must lie in (-1, 1)");
    std::set<CountryCode> seen;
    for (const auto& c : spec.countries) {
        if (!seen.insert(c.code).second) invalid("duplicate country " + c.code.str());
    }
    if (!spec.planted_communities.empty() && spec.planted_communities.size() != spec.countries.size()) {
        invalid("planted_communities must cover every country");
    }
    for (int m : spec.planted_communities) {
        if (m < 0) invalid("negative module id");
    }
    for (const auto& cp : spec.planted_couplings) {
        if (cp.lag < 1 || cp.lag > 14) invalid("coupling lag " + std::to_string(cp.lag) + " outside [1,14]");
        if (!(std::abs(cp.coefficient) < 1)) invalid("coupling coefficient must lie in (-1, 1)");
        if (country_slot(spec, cp.source) < 0 || country_slot(spec, cp.target) < 0) {
            invalid("coupling " + cp.source.str() + "->" + cp.target.str() + " names an unknown country");
        }
        if (cp.source == cp.target) invalid("coupling on a self pair");
    }
}

CoupledSeries gen_coupled_series(const WorldSpec& spec) {
    validate(spec);
    const auto n = spec.countries.size();
    const auto T = static_cast<std::size_t>(spec.period_days);
    CoupledSeries out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const EdgeKey key{spec.countries[i].code, spec.countries[j].code};
            Rng rng(derive_seed(spec.seed, i * n + j));
            std::vector<double> m(T, 0.0), p(T, 0.0);
            for (std::size_t t = 0; t < T; ++t) {
                const double em = rng.normal(), ep = rng.normal();
                m[t] = spec.noise_sigma * em + (t ? spec.ar_coefficient * m[t - 1] : 0.0);
                p[t] = spec.noise_sigma * ep + (t ? spec.ar_coefficient * p[t - 1] : 0.0);
                for (const auto& cp : spec.planted_couplings) {
                    if (cp.source != key.first || cp.target != key.second) continue;
                    const auto lag = static_cast<std::size_t>(cp.lag);
                    if (t < lag) continue;
                    if (cp.direction == GrangerDirection::MediaToPublic) p[t] += cp.coefficient * m[t - lag];
                    else m[t] += cp.coefficient * p[t - lag];
                }
            }
            out.media.emplace(key, std::move(m));
            out.public_.emplace(key, std::move(p));
        }
    }
    return out;
}

AttentionNetwork gen_planted_network(const WorldSpec& spec, double p_in, double p_out, const WeightLaw& law,
                                     Layer layer) {
    validate(spec);
    if (!(p_out >= 0 && p_in <= 1 && p_out <= p_in)) invalid("need 0 <= p_out <= p_in <= 1");
    if (law.kind == WeightLaw::Kind::Uniform && !(law.low > 0 && law.high >= law.low)) {
        invalid("uniform weights need 0 < low <= high");
    }
    if (law.kind == WeightLaw::Kind::Constant && !(law.low > 0)) invalid("constant weight must be positive");
    const auto n = spec.countries.size();
    AttentionNetwork net;
    net.layer = layer;
    for (const auto& c : spec.countries) net.nodes.insert(c.code);
    auto module = [&](std::size_t i) { return spec.planted_communities.empty() ? 0 : spec.planted_communities[i]; };
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(spec.seed, (1ULL << 40) + i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double prob = module(i) == module(j) ? p_in : p_out;
            const double draw = rng.uniform();
            const double w = law.kind == WeightLaw::Kind::Constant ? law.low
                                                                   : law.low + (law.high - law.low) * rng.uniform();
            if (draw < prob) net.add_weight(spec.countries[i].code, spec.countries[j].code, w);
        }
    }
    return net;
}

void write_fixture(const WorldSpec& spec, const std::filesystem::path& dir, CountryCode reference) {
    validate(spec);
    std::filesystem::create_directories(dir);
    const auto series = gen_coupled_series(spec);
    const auto T = spec.period_days;
    const auto n = spec.countries.size();

    // Media events with co-mentions drawn around each target's theme topic.
    std::vector<AttentionEvent> events;
    const auto& vocab = topic_vocabulary();
    for (int t = 0; t < T; ++t) {
        for (const auto& [key, m] : series.media) {
            const int si = country_slot(spec, key.first), ti = country_slot(spec, key.second);
            const double level = media_base(spec, si, ti) + 5.0 * m[t];
            const auto count = static_cast<std::int64_t>(std::llround(std::max(0.0, level)));
            if (count == 0) continue;
            Rng rng(derive_seed(spec.seed, (2ULL << 40) + static_cast<std::uint64_t>(t) * n * n + si * n + ti));
            const Topic theme = kTopics[static_cast<std::size_t>(ti) % kTopics.size()];
            AttentionEvent ev{spec.start + std::chrono::days(t), key.first, key.second, count, {}};
            const auto& words = vocab.at(rng.uniform() < 0.7 ? theme : kTopics[rng.below(kTopics.size())]);
            ev.co_mentions.push_back(words[rng.below(words.size())]);
            if (rng.uniform() < 0.25) {
                const auto& other = vocab.at(kTopics[rng.below(kTopics.size())]);
                ev.co_mentions.push_back(other[rng.below(other.size())]);
            }
            events.push_back(std::move(ev));
        }
    }
    {
        std::ofstream f(dir / "events.csv");
        write_attention_events(f, events);
    }

    // Two windows per source sharing the middle day, each scaled to 0..100.
    const int split = (T - 1) / 2;
    std::vector<TrendsWindow> windows;
    for (const auto& src : spec.countries) {
        if (src.code == reference) continue;
        for (int w = 0; w < 2; ++w) {
            const int first = w == 0 ? 0 : split;
            const int last = w == 0 ? split : T - 1;
            TrendsWindow win;
            win.source = src.code;
            win.start_date = spec.start + std::chrono::days(first);
            win.end_date = spec.start + std::chrono::days(last);
            const int si = country_slot(spec, src.code);
            auto volume = [&](const EdgeKey& key, double p) {
                return std::max(0.0, public_base(spec, si, country_slot(spec, key.second)) + 5.0 * p);
            };
            double peak = 0.0;
            for (const auto& [key, p] : series.public_) {
                if (key.first != src.code) continue;
                for (int t = first; t <= last; ++t) peak = std::max(peak, volume(key, p[t]));
            }
            for (const auto& [key, p] : series.public_) {
                if (key.first != src.code) continue;
                auto& vals = win.values[key.second];
                for (int t = first; t <= last; ++t) {
                    const double v = volume(key, p[t]);
                    vals.push_back(static_cast<int>(std::clamp<long long>(std::llround(100.0 * v / peak), 0, 100)));
                }
            }
            windows.push_back(std::move(win));
        }
    }
    {
        std::ofstream f(dir / "trends.csv");
        write_trends_windows(f, windows);
    }
    {
        RegionMap rm;
        for (const auto& c : spec.countries) rm.emplace(c.code, c.region);
        std::ofstream f(dir / "regions.csv");
        write_region_map(f, rm);
    }
    {
        Rng rng(derive_seed(spec.seed, 3ULL << 40));
        std::ofstream f(dir / "embeddings.txt");
        auto emit = [&](const std::string& word, std::size_t axis, double noise) {
            f << word;
            for (std::size_t d = 0; d < kEmbeddingDim; ++d) {
                double v = d == axis ? 1.0 : noise * (rng.uniform() - 0.5);
                if (d == kEmbeddingDim - 1) v += 0.1;
                f << ' ' << csv::fmt_real(v);
            }
            f << '\n';
        };
        for (std::size_t k = 0; k < kTopics.size(); ++k) emit(std::string(topic_name(kTopics[k])), k, 0.0);
        for (std::size_t k = 0; k < kTopics.size(); ++k) {
            for (const auto& w : vocab.at(kTopics[k])) emit(w, k, 0.35);
        }
    }
    {
        nlohmann::ordered_json truth;
        truth["seed"] = spec.seed;
        truth["start"] = format_date(spec.start);
        truth["period_days"] = spec.period_days;
        truth["reference"] = reference.str();
        auto& countries = truth["countries"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < n; ++i) {
            countries.push_back({{"code", spec.countries[i].code.str()},
                                 {"region", region_name(spec.countries[i].region)},
                                 {"module", spec.planted_communities.empty() ? 0 : spec.planted_communities[i]}});
        }
        auto& couplings = truth["couplings"] = nlohmann::ordered_json::array();
        for (const auto& cp : spec.planted_couplings) {
            couplings.push_back({{"source", cp.source.str()},
                                 {"target", cp.target.str()},
                                 {"direction", cp.direction == GrangerDirection::MediaToPublic ? "media_to_public"
                                                                                               : "public_to_media"},
                                 {"lag", cp.lag},
                                 {"coefficient", cp.coefficient}});
        }
        std::ofstream f(dir / "truth.json");
        f << truth.dump(2) << '\n';
    }
}

WorldSpec bundled_fixture_spec() {
    WorldSpec spec;
    spec.countries = {{CountryCode("BR"), Region::Americas}, {CountryCode("DZ"), Region::Africa},
                      {CountryCode("FR"), Region::Europe},   {CountryCode("GB"), Region::Europe},
                      {CountryCode("KR"), Region::Asia},     {CountryCode("US"), Region::Americas}};
    spec.planted_communities = {0, 1, 1, 1, 0, 0};
    spec.planted_couplings = {{CountryCode("FR"), CountryCode("GB"), GrangerDirection::MediaToPublic, 3, 0.8},
                              {CountryCode("KR"), CountryCode("US"), GrangerDirection::PublicToMedia, 2, 0.7}};
    spec.seed = 20160307;
    return spec;
}

}  // namespace attnet
