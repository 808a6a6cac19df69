#include "attnet/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include "attnet/ingest.hpp"
#include "attnet/rng.hpp"
#include "attnet/stats.hpp"
#include "csv.hpp"
#include "json.hpp"

namespace attnet {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view stage_name(Stage s) noexcept {
    switch (s) {
        case Stage::Stitch: return "stitch";
        case Stage::Build: return "build";
        case Stage::Backbone: return "backbone";
        case Stage::Metrics: return "metrics";
        case Stage::Motifs: return "motifs";
        case Stage::Communities: return "communities";
        case Stage::Regions: return "regions";
        case Stage::Granger: return "granger";
        case Stage::Topics: return "topics";
    }
    return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : kAllStages) {
        if (stage_name(s) == name) return s;
    }
    return std::nullopt;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::Io, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

// ---------------------------------------------------------------- config

namespace {

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError(what); }

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        config_fail("config key '" + key + "' has the wrong type");
    }
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) config_fail("config section '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            config_fail("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

Date config_date(const json& j, const std::string& key) {
    try {
        return parse_date(get_as<std::string>(j, key));
    } catch (const Error& e) {
        config_fail("config key '" + key + "': " + e.what());
    }
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_fail(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "", {"inputs", "period", "stitch", "backbone", "granger", "motifs", "communities", "metrics",
                              "regions", "stages", "report", "output", "workers"});

    PipelineConfig cfg;
    auto resolve = [&](const json& j, const std::string& key) {
        fs::path p = get_as<std::string>(j, key);
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    if (root.contains("inputs")) {
        const auto& in = root["inputs"];
        reject_unknown(in, "inputs", {"events", "trends", "regions", "embeddings"});
        if (in.contains("events")) cfg.events = resolve(in["events"], "inputs.events");
        if (in.contains("trends")) cfg.trends = resolve(in["trends"], "inputs.trends");
        if (in.contains("regions")) cfg.regions = resolve(in["regions"], "inputs.regions");
        if (in.contains("embeddings")) cfg.embeddings = resolve(in["embeddings"], "inputs.embeddings");
    }
    if (root.contains("period")) {
        const auto& p = root["period"];
        reject_unknown(p, "period", {"first", "last"});
        if (p.contains("first")) cfg.period.first = config_date(p["first"], "period.first");
        if (p.contains("last")) cfg.period.last = config_date(p["last"], "period.last");
    }
    if (root.contains("stitch")) {
        const auto& s = root["stitch"];
        reject_unknown(s, "stitch", {"reference", "smoothing_add", "scale_top"});
        if (s.contains("reference")) {
            const auto ref = get_as<std::string>(s["reference"], "stitch.reference");
            if (!CountryCode::valid(ref)) config_fail("stitch.reference is not a country code: " + ref);
            cfg.stitch.reference_target = CountryCode(ref);
        }
        if (s.contains("smoothing_add")) cfg.stitch.smoothing_add = get_as<int>(s["smoothing_add"], "stitch.smoothing_add");
        if (s.contains("scale_top")) cfg.stitch.scale_top = get_as<double>(s["scale_top"], "stitch.scale_top");
    }
    if (root.contains("backbone")) {
        const auto& b = root["backbone"];
        reject_unknown(b, "backbone", {"alpha"});
        if (b.contains("alpha")) cfg.backbone_alpha = get_as<double>(b["alpha"], "backbone.alpha");
    }
    if (root.contains("granger")) {
        const auto& g = root["granger"];
        reject_unknown(g, "granger", {"alpha", "min_lag", "max_lag", "difference_order"});
        if (g.contains("alpha")) cfg.granger.alpha = get_as<double>(g["alpha"], "granger.alpha");
        if (g.contains("min_lag")) cfg.granger.min_lag = get_as<int>(g["min_lag"], "granger.min_lag");
        if (g.contains("max_lag")) cfg.granger.max_lag = get_as<int>(g["max_lag"], "granger.max_lag");
        if (g.contains("difference_order")) {
            cfg.difference_order = get_as<int>(g["difference_order"], "granger.difference_order");
        }
    }
    if (root.contains("motifs")) {
        const auto& m = root["motifs"];
        reject_unknown(m, "motifs", {"ensemble_size", "swaps_per_edge", "seed"});
        if (m.contains("ensemble_size")) cfg.motif_ensemble = get_as<int>(m["ensemble_size"], "motifs.ensemble_size");
        if (m.contains("swaps_per_edge")) {
            cfg.motif_swaps_per_edge = get_as<int>(m["swaps_per_edge"], "motifs.swaps_per_edge");
        }
        if (m.contains("seed")) cfg.motif_seed = get_as<std::uint64_t>(m["seed"], "motifs.seed");
    }
    if (root.contains("communities")) {
        const auto& c = root["communities"];
        reject_unknown(c, "communities", {"seed", "restarts", "teleport"});
        if (c.contains("seed")) cfg.community_seed = get_as<std::uint64_t>(c["seed"], "communities.seed");
        if (c.contains("restarts")) cfg.community_restarts = get_as<int>(c["restarts"], "communities.restarts");
        if (c.contains("teleport")) cfg.community_teleport = get_as<double>(c["teleport"], "communities.teleport");
    }
    if (root.contains("metrics")) {
        const auto& m = root["metrics"];
        reject_unknown(m, "metrics", {"topk"});
        if (m.contains("topk")) cfg.topk = get_as<std::vector<std::size_t>>(m["topk"], "metrics.topk");
    }
    if (root.contains("regions")) {
        const auto& r = root["regions"];
        reject_unknown(r, "regions", {"network"});
        if (r.contains("network")) {
            const auto which = get_as<std::string>(r["network"], "regions.network");
            if (which != "full" && which != "backbone") config_fail("regions.network must be 'full' or 'backbone'");
            cfg.regions_on_backbone = which == "backbone";
        }
    }
    if (root.contains("stages")) {
        cfg.stages.clear();
        for (const auto& name : get_as<std::vector<std::string>>(root["stages"], "stages")) {
            const auto s = parse_stage(name);
            if (!s) config_fail("unknown stage '" + name + "'");
            cfg.stages.insert(*s);
        }
    }
    if (root.contains("report")) cfg.write_report = get_as<bool>(root["report"], "report");
    if (root.contains("output")) cfg.output = resolve(root["output"], "output");
    if (root.contains("workers")) cfg.workers = get_as<int>(root["workers"], "workers");
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) config_fail("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

void validate_config(const PipelineConfig& cfg) {
    const auto& st = cfg.stages;
    const bool any_beyond_stitch = std::any_of(st.begin(), st.end(), [](Stage s) { return s != Stage::Stitch; });
    auto need = [](const fs::path& p, std::string_view role, std::string_view why) {
        if (p.empty()) config_fail(std::string(role) + " input is required by " + std::string(why));
        if (!fs::is_regular_file(p)) config_fail(std::string(role) + " input does not exist: " + p.string());
    };
    if (!st.empty()) need(cfg.trends, "trends", "the enabled stages");
    if (any_beyond_stitch) need(cfg.events, "events", "the enabled stages");
    if (st.contains(Stage::Regions)) need(cfg.regions, "regions", "the regions stage");
    if (st.contains(Stage::Topics)) need(cfg.embeddings, "embeddings", "the topics stage");
    if (!cfg.regions.empty() && !fs::is_regular_file(cfg.regions)) {
        config_fail("regions input does not exist: " + cfg.regions.string());
    }

    if (cfg.period.last < cfg.period.first) config_fail("period.last precedes period.first");
    if (cfg.stitch.smoothing_add < 1) config_fail("stitch.smoothing_add must be >= 1");
    if (!(cfg.stitch.scale_top > 0)) config_fail("stitch.scale_top must be > 0");
    if (!(cfg.backbone_alpha > 0 && cfg.backbone_alpha < 1)) config_fail("backbone.alpha must lie in (0, 1)");
    if (!(cfg.granger.alpha > 0 && cfg.granger.alpha < 1)) config_fail("granger.alpha must lie in (0, 1)");
    if (cfg.granger.min_lag < 1 || cfg.granger.max_lag < cfg.granger.min_lag) {
        config_fail("granger lag range must satisfy 1 <= min_lag <= max_lag");
    }
    if (cfg.difference_order < 0 || cfg.difference_order > 2) config_fail("granger.difference_order must be 0..2");
    if (cfg.motif_ensemble < 2) config_fail("motifs.ensemble_size must be >= 2");
    if (cfg.motif_swaps_per_edge < 1) config_fail("motifs.swaps_per_edge must be >= 1");
    if (cfg.community_restarts < 1) config_fail("communities.restarts must be >= 1");
    if (!(cfg.community_teleport > 0 && cfg.community_teleport < 1)) {
        config_fail("communities.teleport must lie in (0, 1)");
    }
    if (cfg.topk.empty() || std::find(cfg.topk.begin(), cfg.topk.end(), 0u) != cfg.topk.end()) {
        config_fail("metrics.topk must be a non-empty list of positive integers");
    }
    if (cfg.workers < 1) config_fail("workers must be >= 1");

    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec || !fs::is_directory(cfg.output)) config_fail("cannot create output directory " + cfg.output.string());
    const fs::path probe = cfg.output / ".attnet_write_probe";
    {
        std::ofstream p(probe);
        if (!p) config_fail("output directory is not writable: " + cfg.output.string());
    }
    fs::remove(probe, ec);
}

// ---------------------------------------------------------------- running

namespace {

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json summary_json(const NetworkSummary& s) {
    return json{{"nodes", s.n_nodes},
                {"links", s.n_links},
                {"mean_degree", opt_json(s.mean_degree)},
                {"clustering_reciprocal", opt_json(s.clustering)},
                {"assortativity", opt_json(s.assortativity)},
                {"scc_fraction", opt_json(s.scc_fraction)},
                {"reciprocity", opt_json(s.reciprocity)}};
}

json test_json(const stats::TestResult& t) {
    return json{{"statistic", t.statistic}, {"p", t.p}, {"method", t.method}};
}

class Run {
public:
    Run(const PipelineConfig& cfg, RunSummary& s) : cfg_(cfg), s_(s) {}

    void write(const std::string& rel, const std::string& content) {
        const fs::path path = cfg_.output / rel;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        out << content;
        out.close();
        if (!out) throw Error(Errc::Io, "cannot write " + path.string());
        s_.files.push_back({rel, sha256_hex(content), content.size()});
    }

    template <typename F>
    void write_with(Stage stage, const std::string& rel, F&& fill) {
        if (!cfg_.write_stage_files || !cfg_.stages.contains(stage)) return;
        std::ostringstream os;
        fill(os);
        write(rel, os.str());
    }

    const std::vector<AttentionEvent>& events() {
        if (!events_) {
            events_ = load_attention_events(cfg_.events, cfg_.period);
        }
        return events_->events;
    }

    const std::vector<Series>& series() {
        if (series_done_) return s_.series;
        const auto windows = load_trends_windows(cfg_.trends);
        std::map<CountryCode, std::vector<const TrendsWindow*>> by_source;
        for (const auto& w : windows) by_source[w.source].push_back(&w);
        for (auto& [source, list] : by_source) {
            if (list.size() != 2) {
                throw Error(Errc::NoOverlap,
                            source.str() + " has " + std::to_string(list.size()) + " windows, expected 2");
            }
            if (list[1]->start_date < list[0]->start_date) std::swap(list[0], list[1]);
            try {
                for (auto& sr : stitch_windows(*list[0], *list[1], cfg_.stitch)) s_.series.push_back(clip(std::move(sr)));
            } catch (const Error& e) {
                if (e.code() != Errc::MissingReference) throw;
                skipped_.emplace_back(source, e.what());
            }
        }
        series_done_ = true;
        write_with(Stage::Stitch, "stitch/series.csv", [&](std::ostream& os) { write_series_csv(os, s_.series); });
        write_with(Stage::Stitch, "stitch/seams.csv", [&](std::ostream& os) {
            os << "source,target,seam_discrepancy,gap\n";
            for (const auto& sr : s_.series) {
                os << sr.source.str() << ',' << sr.target.str() << ',' << csv::fmt_real(sr.seam_discrepancy) << ','
                   << (sr.gap ? 1 : 0) << '\n';
            }
        });
        write_with(Stage::Stitch, "stitch/skipped.csv", [&](std::ostream& os) {
            os << "source,reason\n";
            for (const auto& [src, why] : skipped_) os << src.str() << ',' << why << '\n';
        });
        return s_.series;
    }

    const MultiplexAttention& networks() {
        if (s_.networks) return *s_.networks;
        const auto& evs = events();
        const auto& ser = series();
        MultiplexAttention mx;
        mx.media = aggregate(build_daily_media(evs), Layer::Media);
        mx.media.layer = Layer::Media;
        mx.public_ = aggregate(build_daily_public(ser), Layer::Public);
        mx.public_.layer = Layer::Public;
        s_.networks = std::move(mx);
        write_with(Stage::Build, "build/media_edges.csv",
                   [&](std::ostream& os) { write_edge_list(os, s_.networks->media); });
        write_with(Stage::Build, "build/public_edges.csv",
                   [&](std::ostream& os) { write_edge_list(os, s_.networks->public_); });
        write_with(Stage::Build, "build/build.json", [&](std::ostream& os) {
            json j{{"events_in_period", events_->events.size()},
                   {"events_out_of_period", events_->out_of_period},
                   {"public_series", ser.size()},
                   {"sources_without_reference", skipped_.size()},
                   {"media", {{"nodes", s_.networks->media.node_count()}, {"links", s_.networks->media.edge_count()}}},
                   {"public",
                    {{"nodes", s_.networks->public_.node_count()}, {"links", s_.networks->public_.edge_count()}}}};
            os << j.dump(2) << '\n';
        });
        return *s_.networks;
    }

    const MultiplexAttention& backbones() {
        if (s_.backbones) return *s_.backbones;
        const auto& nets = networks();
        const BackboneParams bp{cfg_.backbone_alpha};
        MultiplexAttention bb;
        bb.media = disparity_backbone(nets.media, bp);
        bb.public_ = disparity_backbone(nets.public_, bp);
        s_.backbones = std::move(bb);
        write_with(Stage::Backbone, "backbone/media_edges.csv",
                   [&](std::ostream& os) { write_edge_list(os, s_.backbones->media); });
        write_with(Stage::Backbone, "backbone/public_edges.csv",
                   [&](std::ostream& os) { write_edge_list(os, s_.backbones->public_); });
        write_with(Stage::Backbone, "backbone/backbone.json", [&](std::ostream& os) {
            auto layer = [](const AttentionNetwork& full, const AttentionNetwork& b) {
                const double kept = full.edge_count() ? static_cast<double>(b.edge_count()) /
                                                            static_cast<double>(full.edge_count())
                                                      : 0.0;
                return json{{"nodes", b.node_count()}, {"links", b.edge_count()}, {"link_retention", kept}};
            };
            json j{{"alpha", cfg_.backbone_alpha},
                   {"media", layer(nets.media, s_.backbones->media)},
                   {"public", layer(nets.public_, s_.backbones->public_)}};
            os << j.dump(2) << '\n';
        });
        return *s_.backbones;
    }

    std::map<EdgeKey, PairSeries> pair_series(const std::vector<AttentionEvent>& evs) {
        const auto& ser = series();
        const int days = cfg_.period.days();
        std::map<EdgeKey, std::vector<double>> media;
        for (const auto& ev : evs) {
            if (ev.source == ev.target) continue;
            auto& v = media[{ev.source, ev.target}];
            if (v.empty()) v.assign(static_cast<std::size_t>(days), 0.0);
            v[static_cast<std::size_t>(day_offset(cfg_.period.first, ev.date))] += static_cast<double>(ev.count);
        }
        std::map<EdgeKey, PairSeries> pairs;
        for (const auto& sr : ser) {
            if (sr.source == sr.target || sr.gap) continue;
            auto it = media.find({sr.source, sr.target});
            if (it == media.end()) continue;
            pairs.emplace(EdgeKey{sr.source, sr.target}, PairSeries{it->second, sr.values});
        }
        return pairs;
    }

    GrangerMatrixOptions granger_options() const {
        GrangerMatrixOptions o;
        o.scan = cfg_.granger;
        o.difference_order = cfg_.difference_order;
        o.workers = cfg_.workers;
        return o;
    }

    void run_stage(Stage stage) {
        switch (stage) {
            case Stage::Stitch: series(); break;
            case Stage::Build: networks(); break;
            case Stage::Backbone: backbones(); break;
            case Stage::Metrics: metrics(); break;
            case Stage::Motifs: motifs(); break;
            case Stage::Communities: communities(); break;
            case Stage::Regions: regions(); break;
            case Stage::Granger: granger(); break;
            case Stage::Topics: topics(); break;
        }
    }

private:
    Series clip(Series sr) const {
        const Period have = sr.period();
        if (have.first > cfg_.period.first || have.last < cfg_.period.last) {
            throw Error(Errc::PeriodMismatch, sr.source.str() + "->" + sr.target.str() + " covers only " +
                                                  format_date(have.first) + ".." + format_date(have.last));
        }
        const auto off = static_cast<std::size_t>(day_offset(have.first, cfg_.period.first));
        std::vector<double> v(sr.values.begin() + static_cast<std::ptrdiff_t>(off),
                              sr.values.begin() + static_cast<std::ptrdiff_t>(off + cfg_.period.days()));
        sr.values = std::move(v);
        sr.start_date = cfg_.period.first;
        return sr;
    }

    void metrics() {
        const auto& nets = networks();
        const auto& bb = backbones();
        std::map<Layer, LayerMetrics> out;
        constexpr std::array<Measure, 4> measures = {Measure::Degree, Measure::Betweenness, Measure::Eigenvector,
                                                     Measure::Closeness};
        for (Layer layer : {Layer::Media, Layer::Public}) {
            const auto& full = layer == Layer::Media ? nets.media : nets.public_;
            const auto& back = layer == Layer::Media ? bb.media : bb.public_;
            auto& lm = out[layer];
            for (Measure m : measures) lm.centrality[m] = centralities(back, m);
            for (CountryCode c : full.nodes) {
                try {
                    lm.gini[c] = gini_out_weights(full, c);
                } catch (const Error& e) {
                    if (e.code() != Errc::NoOutEdges && e.code() != Errc::ZeroMean) throw;
                }
            }
        }
        for (std::size_t k : cfg_.topk) {
            auto& row = s_.jaccard[k];
            for (CountryCode c : nets.media.nodes) {
                if (!nets.public_.nodes.contains(c)) continue;
                row[c] = jaccard_topk(topk_neighbors(nets.media, c, k), topk_neighbors(nets.public_, c, k));
            }
        }
        s_.metrics = std::move(out);

        for (Layer layer : {Layer::Media, Layer::Public}) {
            const std::string name(layer_name(layer));
            write_with(Stage::Metrics, "metrics/centrality_" + name + ".csv", [&](std::ostream& os) {
                os << "node,measure,value\n";
                for (const auto& [m, cv] : s_.metrics->at(layer).centrality) {
                    for (const auto& [c, v] : cv.values) {
                        os << c.str() << ',' << measure_name(m) << ',' << csv::fmt_real(v) << '\n';
                    }
                }
            });
        }
        write_with(Stage::Metrics, "metrics/gini.csv", [&](std::ostream& os) {
            os << "layer,node,gini\n";
            for (const auto& [layer, lm] : *s_.metrics) {
                for (const auto& [c, g] : lm.gini) os << layer_name(layer) << ',' << c.str() << ',' << csv::fmt_real(g) << '\n';
            }
        });
        write_with(Stage::Metrics, "metrics/topk_jaccard.csv", [&](std::ostream& os) {
            os << "pair,k,jaccard\n";
            for (const auto& [k, row] : s_.jaccard) {
                for (const auto& [c, v] : row) os << c.str() << ',' << k << ',' << csv::fmt_real(v) << '\n';
            }
        });
        write_with(Stage::Metrics, "metrics/summary.json", [&](std::ostream& os) {
            json j;
            j["networks"] = json{{"media", summary_json(network_summary(nets.media))},
                                 {"public", summary_json(network_summary(nets.public_))},
                                 {"media_backbone", summary_json(network_summary(bb.media))},
                                 {"public_backbone", summary_json(network_summary(bb.public_))}};
            json align = json::object();
            for (Measure m : measures) {
                try {
                    align[std::string(measure_name(m))] = test_json(spearman_centrality_alignment(bb.media, bb.public_, m));
                } catch (const Error& e) {
                    align[std::string(measure_name(m))] = json{{"error", e.what()}};
                }
            }
            j["centrality_alignment"] = align;
            std::vector<double> gm, gp;
            for (const auto& [c, g] : s_.metrics->at(Layer::Media).gini) gm.push_back(g);
            for (const auto& [c, g] : s_.metrics->at(Layer::Public).gini) gp.push_back(g);
            try {
                j["gini_media_vs_public"] = test_json(stats::mann_whitney_u(gm, gp));
            } catch (const Error& e) {
                j["gini_media_vs_public"] = json{{"error", e.what()}};
            }
            os << j.dump(2) << '\n';
        });
    }

    void motifs() {
        const auto& bb = backbones();
        MotifOptions opts;
        opts.ensemble_size = cfg_.motif_ensemble;
        opts.swaps_per_edge = cfg_.motif_swaps_per_edge;
        opts.workers = cfg_.workers;
        for (Layer layer : {Layer::Media, Layer::Public}) {
            opts.seed = derive_seed_for(cfg_.motif_seed, layer);
            s_.motifs[layer] = motif_zscores(layer == Layer::Media ? bb.media : bb.public_, opts);
            write_with(Stage::Motifs, "motifs/" + std::string(layer_name(layer)) + ".csv",
                       [&](std::ostream& os) { write_motif_csv(os, s_.motifs.at(layer)); });
        }
    }

    void communities() {
        const auto& bb = backbones();
        json j = json::object();
        for (Layer layer : {Layer::Media, Layer::Public}) {
            CommunityOptions opts;
            opts.seed = derive_seed_for(cfg_.community_seed, layer);
            opts.restarts = cfg_.community_restarts;
            opts.teleport = cfg_.community_teleport;
            Digraph g = Digraph::from(layer == Layer::Media ? bb.media : bb.public_);
            if (g.size() == 0) throw Error(Errc::EmptyNetwork, std::string(layer_name(layer)) + " backbone is empty");
            Partition p = detect_communities(g, opts);
            j[std::string(layer_name(layer))] = json{{"modules", p.module_count()}, {"codelength", p.codelength}};
            const auto& stored = s_.communities.insert_or_assign(layer, std::pair{std::move(g), std::move(p)}).first->second;
            write_with(Stage::Communities, "communities/" + std::string(layer_name(layer)) + ".csv",
                       [&](std::ostream& os) { write_partition_csv(os, stored.first, stored.second); });
        }
        write_with(Stage::Communities, "communities/summary.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    }

    void regions() {
        const auto& nets = cfg_.regions_on_backbone ? backbones() : networks();
        const RegionMap rm = load_region_map(cfg_.regions);
        s_.region_flows[Layer::Media] = region_flow_matrix(nets.media, rm);
        s_.region_flows[Layer::Public] = region_flow_matrix(nets.public_, rm);
        const auto cmp = region_gini_compare(nets.media, nets.public_, rm);
        for (Layer layer : {Layer::Media, Layer::Public}) {
            write_with(Stage::Regions, "regions/flow_" + std::string(layer_name(layer)) + ".csv",
                       [&](std::ostream& os) { write_region_matrix_csv(os, s_.region_flows.at(layer)); });
        }
        write_with(Stage::Regions, "regions/gini.json", [&](std::ostream& os) {
            json rows = json::array();
            for (std::size_t i = 0; i < cmp.regions.size(); ++i) {
                rows.push_back(json{{"region", region_name(cmp.regions[i])},
                                    {"media_gini", cmp.media_gini[i]},
                                    {"public_gini", cmp.public_gini[i]}});
            }
            os << json{{"regions", rows}, {"test", test_json(cmp.test)}}.dump(2) << '\n';
        });
    }

    void granger() {
        const auto pairs = pair_series(events());
        s_.granger = granger_matrix(pairs, granger_options());
        write_with(Stage::Granger, "granger/pairs.csv", [&](std::ostream& os) { write_granger_csv(os, *s_.granger); });
        write_with(Stage::Granger, "granger/features.csv", [&](std::ostream& os) {
            const auto& bb = backbones();
            std::optional<RegionMap> rm;
            if (!cfg_.regions.empty()) rm = load_region_map(cfg_.regions);
            write_feature_table(os, *s_.granger, pairs, bb.media, bb.public_, rm ? &*rm : nullptr);
        });
        write_with(Stage::Granger, "granger/summary.json",
                   [&](std::ostream& os) { os << class_counts(*s_.granger).dump(2) << '\n'; });
    }

    void topics() {
        const auto& evs = events();
        const EmbeddingTable emb = load_embeddings(cfg_.embeddings);
        TopicClassifier classify(emb);
        std::set<CountryCode> targets;
        for (const auto& ev : evs) targets.insert(ev.target);
        std::map<CountryCode, std::optional<CoverageTopic>> coverage;
        for (CountryCode t : targets) {
            try {
                coverage[t] = country_coverage_topic(evs, t, classify);
            } catch (const Error& e) {
                if (e.code() != Errc::NoCoverage) throw;
                coverage[t] = std::nullopt;
            }
        }
        write_with(Stage::Topics, "topics/coverage.csv", [&](std::ostream& os) {
            os << "target,topic\n";
            for (const auto& [t, c] : coverage) os << t.str() << ',' << (c ? topic_name(c->overall) : "none") << '\n';
        });
        write_with(Stage::Topics, "topics/coverage_by_source.csv", [&](std::ostream& os) {
            os << "target,source,topic\n";
            for (const auto& [t, c] : coverage) {
                if (!c) continue;
                for (const auto& [src, topic] : c->per_source) {
                    os << t.str() << ',' << src.str() << ',' << topic_name(topic) << '\n';
                }
            }
        });

        // Media series of each pair restricted to coverage carrying the target's topic.
        std::map<Topic, std::vector<AttentionEvent>> filtered;
        std::map<EdgeKey, PairSeries> pairs;
        for (const auto& [key, ps] : pair_series(evs)) {
            const auto& cov = coverage.find(key.second);
            if (cov == coverage.end() || !cov->second || cov->second->overall == Topic::Unknown) continue;
            const Topic topic = cov->second->overall;
            auto f = filtered.find(topic);
            if (f == filtered.end()) f = filtered.emplace(topic, filter_events_by_topic(evs, topic, classify)).first;
            std::vector<double> media(ps.media.size(), 0.0);
            for (const auto& ev : f->second) {
                if (ev.source == key.first && ev.target == key.second) {
                    media[static_cast<std::size_t>(day_offset(cfg_.period.first, ev.date))] += static_cast<double>(ev.count);
                }
            }
            pairs.emplace(key, PairSeries{std::move(media), ps.public_});
        }
        s_.granger_topic = granger_matrix(pairs, granger_options());
        write_with(Stage::Topics, "topics/granger_pairs.csv",
                   [&](std::ostream& os) { write_granger_csv(os, *s_.granger_topic); });
        write_with(Stage::Topics, "topics/granger_summary.json",
                   [&](std::ostream& os) { os << class_counts(*s_.granger_topic).dump(2) << '\n'; });
    }

public:
    static json class_counts(const std::map<EdgeKey, PairOutcome>& results) {
        std::map<std::string, int> counts;
        for (PairClass c : {PairClass::MediaCausesPublic, PairClass::PublicCausesMedia, PairClass::Both,
                            PairClass::Neither}) {
            counts[std::string(pair_class_name(c))] = 0;
        }
        int untested = 0;
        for (const auto& [_, o] : results) {
            if (o.cls) {
                ++counts[std::string(pair_class_name(*o.cls))];
            } else {
                ++untested;
            }
        }
        json j{{"pairs", results.size()}};
        for (const auto& [name, n] : counts) j[name] = n;
        j["untested"] = untested;
        return j;
    }

private:
    static std::uint64_t derive_seed_for(std::uint64_t seed, Layer layer) {
        return derive_seed(seed, layer == Layer::Media ? 0 : 1);
    }

    const PipelineConfig& cfg_;
    RunSummary& s_;
    std::optional<EventLoad> events_;
    bool series_done_ = false;
    std::vector<std::pair<CountryCode, std::string>> skipped_;
};

json config_echo(const PipelineConfig& cfg) {
    json stages = json::array();
    for (Stage s : kAllStages) {
        if (cfg.stages.contains(s)) stages.push_back(stage_name(s));
    }
    return json{{"period", {{"first", format_date(cfg.period.first)}, {"last", format_date(cfg.period.last)}}},
                {"stitch",
                 {{"reference", cfg.stitch.reference_target.str()},
                  {"smoothing_add", cfg.stitch.smoothing_add},
                  {"scale_top", cfg.stitch.scale_top}}},
                {"backbone", {{"alpha", cfg.backbone_alpha}}},
                {"granger",
                 {{"alpha", cfg.granger.alpha},
                  {"min_lag", cfg.granger.min_lag},
                  {"max_lag", cfg.granger.max_lag},
                  {"difference_order", cfg.difference_order}}},
                {"motifs",
                 {{"ensemble_size", cfg.motif_ensemble},
                  {"swaps_per_edge", cfg.motif_swaps_per_edge},
                  {"seed", cfg.motif_seed}}},
                {"communities",
                 {{"seed", cfg.community_seed},
                  {"restarts", cfg.community_restarts},
                  {"teleport", cfg.community_teleport}}},
                {"metrics", {{"topk", cfg.topk}}},
                {"regions", {{"network", cfg.regions_on_backbone ? "backbone" : "full"}}},
                {"stages", stages},
                {"report", cfg.write_report}};
}

std::string file_digest(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const PipelineConfig& cfg, const RunSummary& s) {
    json inputs = json::array();
    for (const auto& [role, path] : {std::pair{"events", cfg.events}, std::pair{"trends", cfg.trends},
                                     std::pair{"regions", cfg.regions}, std::pair{"embeddings", cfg.embeddings}}) {
        if (path.empty() || !fs::is_regular_file(path)) continue;
        inputs.push_back(json{{"role", role}, {"file", path.filename().string()}, {"sha256", file_digest(path)}});
    }
    json stages = json::array();
    for (const auto& st : s.stages) {
        json e{{"name", stage_name(st.stage)}, {"status", st.status}};
        if (!st.error.empty()) e["error"] = st.error;
        stages.push_back(e);
    }
    json files = json::array();
    std::string listing;
    for (const auto& f : s.files) {
        files.push_back(json{{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
        listing += f.path + ' ' + f.sha256 + '\n';
    }
    json m{{"tool", "attnet"},
           {"config", config_echo(cfg)},
           {"inputs", inputs},
           {"stages", stages},
           {"partial", s.partial},
           {"files", files}};
    m["digest"] = sha256_hex(m["config"].dump() + '\n' + m["inputs"].dump() + '\n' + listing);
    m["run"] = json{{"generated_at", utc_timestamp()}};
    std::ofstream out(cfg.output / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
    if (!out) throw Error(Errc::Io, "cannot write manifest");
}

}  // namespace

RunSummary run_pipeline(const PipelineConfig& cfg) {
    validate_config(cfg);
    RunSummary summary;
    Run run(cfg, summary);
    for (Stage stage : kAllStages) {
        if (!cfg.stages.contains(stage)) continue;
        try {
            run.run_stage(stage);
            summary.stages.push_back({stage, "ok", {}});
        } catch (const std::exception& e) {
            summary.stages.push_back({stage, "failed", e.what()});
            summary.partial = true;
            write_manifest(cfg, summary);
            throw StageError(stage, e.what());
        }
    }
    if (cfg.write_report) emit_report(summary, cfg.output);
    write_manifest(cfg, summary);
    return summary;
}

namespace {

template <typename F>
void report_file(RunSummary& s, const fs::path& dir, const std::string& name, F&& fill) {
    std::ostringstream os;
    fill(os);
    const std::string rel = "report/" + name;
    const std::string content = os.str();
    fs::create_directories(dir / "report");
    std::ofstream out(dir / rel, std::ios::binary);
    out << content;
    s.files.push_back({rel, sha256_hex(content), content.size()});
}

void cdf_rows(std::ostream& os, const std::string& prefix, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << prefix << csv::fmt_real(values[i]) << ',' << csv::fmt_real(static_cast<double>(i + 1) / n) << '\n';
    }
}

}  // namespace

void emit_report(RunSummary& s, const fs::path& dir) {
    report_file(s, dir, "jaccard_cdf.csv", [&](std::ostream& os) {
        os << "k,jaccard,cdf\n";
        for (const auto& [k, row] : s.jaccard) {
            std::vector<double> v;
            for (const auto& [_, x] : row) v.push_back(x);
            cdf_rows(os, std::to_string(k) + ",", v);
        }
    });
    report_file(s, dir, "gini_cdf.csv", [&](std::ostream& os) {
        os << "layer,gini,cdf\n";
        if (!s.metrics) return;
        for (const auto& [layer, lm] : *s.metrics) {
            std::vector<double> v;
            for (const auto& [_, x] : lm.gini) v.push_back(x);
            cdf_rows(os, std::string(layer_name(layer)) + ",", v);
        }
    });
    report_file(s, dir, "motif_z.csv", [&](std::ostream& os) {
        os << "class,z_media,z_public\n";
        if (s.motifs.empty()) return;
        auto z = [&](Layer layer, int c) -> std::string {
            auto it = s.motifs.find(layer);
            if (it == s.motifs.end() || !it->second.z[c]) return "undefined";
            return csv::fmt_real(*it->second.z[c]);
        };
        for (int c = 0; c < kTriadClasses; ++c) {
            os << triad_name(static_cast<TriadClass>(c)) << ',' << z(Layer::Media, c) << ',' << z(Layer::Public, c)
               << '\n';
        }
    });
    for (Layer layer : {Layer::Media, Layer::Public}) {
        report_file(s, dir, "region_flow_" + std::string(layer_name(layer)) + ".csv", [&](std::ostream& os) {
            auto it = s.region_flows.find(layer);
            if (it == s.region_flows.end()) {
                os << "source\n";
                return;
            }
            write_region_matrix_csv(os, it->second);
        });
    }
    report_file(s, dir, "communities.csv", [&](std::ostream& os) {
        os << "layer,node,module\n";
        for (const auto& [layer, gp] : s.communities) {
            const auto& [g, p] = gp;
            for (int i = 0; i < g.size(); ++i) {
                os << layer_name(layer) << ',' << g.codes[static_cast<std::size_t>(i)].str() << ','
                   << p.module[static_cast<std::size_t>(i)] << '\n';
            }
        }
    });
    report_file(s, dir, "granger_classes.csv", [&](std::ostream& os) {
        os << "variant,class,count\n";
        auto rows = [&](const char* variant, const std::optional<std::map<EdgeKey, PairOutcome>>& r) {
            if (!r) return;
            const json counts = Run::class_counts(*r);
            for (const auto& [name, n] : counts.items()) {
                if (name == "pairs") continue;
                os << variant << ',' << name << ',' << n.get<int>() << '\n';
            }
        };
        rows("all_coverage", s.granger);
        rows("topic_coverage", s.granger_topic);
    });
    report_file(s, dir, "granger_pairs.csv", [&](std::ostream& os) {
        os << "source,target,class\n";
        if (!s.granger) return;
        for (const auto& [key, o] : *s.granger) {
            os << key.first.str() << ',' << key.second.str() << ','
               << (o.cls ? std::string(pair_class_name(*o.cls)) : std::string("error")) << '\n';
        }
    });
}

}  // namespace attnet
