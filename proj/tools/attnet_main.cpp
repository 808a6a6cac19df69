// attnet command line: one subcommand per pipeline stage plus run, report and simgen.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "attnet/pipeline.hpp"
#include "attnet/simgen.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace attnet;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kStageFailure = 2;

struct Overrides {
    std::string config;
    std::optional<std::string> events, trends, regions, embeddings, output;
    std::optional<std::string> period_first, period_last;
    std::optional<double> backbone_alpha, granger_alpha;
    std::optional<int> min_lag, max_lag, difference_order, ensemble, restarts, workers;
    std::optional<std::uint64_t> motif_seed, community_seed;
    bool no_report = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("-c,--config", o.config, "JSON pipeline config");
    sub->add_option("--events", o.events, "attention events CSV");
    sub->add_option("--trends", o.trends, "trends windows CSV");
    sub->add_option("--regions", o.regions, "country,region CSV");
    sub->add_option("--embeddings", o.embeddings, "word vectors, whitespace separated");
    sub->add_option("-o,--output", o.output, "output directory");
    sub->add_option("--period-first", o.period_first, "first day, YYYY-MM-DD");
    sub->add_option("--period-last", o.period_last, "last day, YYYY-MM-DD");
    sub->add_option("--alpha", o.backbone_alpha, "disparity filter significance");
    sub->add_option("--granger-alpha", o.granger_alpha, "Granger significance");
    sub->add_option("--min-lag", o.min_lag, "smallest lag scanned");
    sub->add_option("--max-lag", o.max_lag, "largest lag scanned");
    sub->add_option("--difference-order", o.difference_order, "differencing before Granger tests");
    sub->add_option("--ensemble", o.ensemble, "motif null ensemble size");
    sub->add_option("--motif-seed", o.motif_seed, "motif null model seed");
    sub->add_option("--community-seed", o.community_seed, "community search seed");
    sub->add_option("--restarts", o.restarts, "community search restarts");
    sub->add_option("-j,--workers", o.workers, "worker threads; outputs do not depend on it");
}

PipelineConfig make_config(const Overrides& o) {
    PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    if (o.events) cfg.events = *o.events;
    if (o.trends) cfg.trends = *o.trends;
    if (o.regions) cfg.regions = *o.regions;
    if (o.embeddings) cfg.embeddings = *o.embeddings;
    if (o.output) cfg.output = *o.output;
    try {
        if (o.period_first) cfg.period.first = parse_date(*o.period_first);
        if (o.period_last) cfg.period.last = parse_date(*o.period_last);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (o.backbone_alpha) cfg.backbone_alpha = *o.backbone_alpha;
    if (o.granger_alpha) cfg.granger.alpha = *o.granger_alpha;
    if (o.min_lag) cfg.granger.min_lag = *o.min_lag;
    if (o.max_lag) cfg.granger.max_lag = *o.max_lag;
    if (o.difference_order) cfg.difference_order = *o.difference_order;
    if (o.ensemble) cfg.motif_ensemble = *o.ensemble;
    if (o.motif_seed) cfg.motif_seed = *o.motif_seed;
    if (o.community_seed) cfg.community_seed = *o.community_seed;
    if (o.restarts) cfg.community_restarts = *o.restarts;
    if (o.workers) cfg.workers = *o.workers;
    return cfg;
}

WorldSpec load_world_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open world spec " + path.string());
    WorldSpec spec;
    try {
        const auto j = nlohmann::json::parse(in);
        for (const auto& c : j.at("countries")) {
            spec.countries.push_back({CountryCode(c.at("code").get<std::string>()),
                                      parse_region(c.at("region").get<std::string>())});
        }
        if (j.contains("start")) spec.start = parse_date(j["start"].get<std::string>());
        spec.period_days = j.value("period_days", spec.period_days);
        spec.planted_communities = j.value("communities", std::vector<int>{});
        for (const auto& c : j.value("couplings", nlohmann::json::array())) {
            Coupling k;
            k.source = CountryCode(c.at("source").get<std::string>());
            k.target = CountryCode(c.at("target").get<std::string>());
            const auto dir = c.value("direction", std::string("media_to_public"));
            if (dir == "media_to_public") {
                k.direction = GrangerDirection::MediaToPublic;
            } else if (dir == "public_to_media") {
                k.direction = GrangerDirection::PublicToMedia;
            } else {
                throw ConfigError("unknown coupling direction " + dir);
            }
            k.lag = c.at("lag").get<int>();
            k.coefficient = c.at("coefficient").get<double>();
            spec.planted_couplings.push_back(k);
        }
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        spec.ar_coefficient = j.value("ar_coefficient", spec.ar_coefficient);
        spec.seed = j.value("seed", spec.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("world spec: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("world spec: ") + e.what());
    }
    return spec;
}

void write_fixture_config(const fs::path& dir) {
    nlohmann::ordered_json cfg{{"inputs",
                                {{"events", "events.csv"},
                                 {"trends", "trends.csv"},
                                 {"regions", "regions.csv"},
                                 {"embeddings", "embeddings.txt"}}},
                               {"backbone", {{"alpha", 0.25}}},
                               {"granger", {{"alpha", 0.05}, {"min_lag", 1}, {"max_lag", 14}}},
                               {"motifs", {{"ensemble_size", 200}, {"seed", 7}}},
                               {"communities", {{"seed", 11}, {"restarts", 4}}},
                               {"metrics", {{"topk", {1, 2, 3}}}},
                               {"output", "out"}};
    std::ofstream out(dir / "config.json");
    out << cfg.dump(2) << '\n';
}

void print_summary(const RunSummary& s) {
    for (const auto& st : s.stages) std::cout << stage_name(st.stage) << ": " << st.status << '\n';
    std::cout << s.files.size() << " files written\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attnet: media and public attention network analysis"};
    app.require_subcommand(1);

    std::map<std::string, Overrides> overrides;
    std::vector<std::pair<CLI::App*, std::optional<Stage>>> pipeline_cmds;
    for (Stage s : kAllStages) {
        const std::string name(stage_name(s));
        auto* sub = app.add_subcommand(name, "run the " + name + " stage (upstream stages run in memory)");
        add_common(sub, overrides[name]);
        pipeline_cmds.emplace_back(sub, s);
    }
    auto* run_cmd = app.add_subcommand("run", "run every configured stage and the report");
    add_common(run_cmd, overrides["run"]);
    run_cmd->add_flag("--no-report", overrides["run"].no_report, "skip report files");
    pipeline_cmds.emplace_back(run_cmd, std::nullopt);
    auto* report_cmd = app.add_subcommand("report", "compute configured stages and write only report files");
    add_common(report_cmd, overrides["report"]);

    std::string sim_out;
    std::string sim_spec;
    std::optional<std::uint64_t> sim_seed;
    auto* sim_cmd = app.add_subcommand("simgen", "write a synthetic fixture with planted structure");
    sim_cmd->add_option("--out", sim_out, "fixture directory")->required();
    sim_cmd->add_option("--spec", sim_spec, "world spec JSON (default: bundled six-country world)");
    sim_cmd->add_option("--seed", sim_seed, "override the world seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (sim_cmd->parsed()) {
            WorldSpec spec = sim_spec.empty() ? bundled_fixture_spec() : load_world_spec(sim_spec);
            if (sim_seed) spec.seed = *sim_seed;
            try {
                validate(spec);
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
            write_fixture(spec, sim_out);
            write_fixture_config(sim_out);
            std::cout << "fixture written to " << sim_out << '\n';
            return kOk;
        }
        if (report_cmd->parsed()) {
            PipelineConfig cfg = make_config(overrides["report"]);
            cfg.write_stage_files = false;
            cfg.write_report = true;
            print_summary(run_pipeline(cfg));
            return kOk;
        }
        for (auto& [sub, stage] : pipeline_cmds) {
            if (!sub->parsed()) continue;
            const auto& o = overrides[sub->get_name()];
            PipelineConfig cfg = make_config(o);
            if (stage) {
                cfg.stages = {*stage};
                cfg.write_report = false;
            } else if (o.no_report) {
                cfg.write_report = false;
            }
            print_summary(run_pipeline(cfg));
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const StageError& e) {
        std::cerr << "stage failed: " << e.what() << '\n';
        return kStageFailure;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return kStageFailure;
    }
    return kConfigError;
}
