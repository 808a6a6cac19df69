#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "attnet/causality.hpp"
#include "attnet/community.hpp"
#include "attnet/core.hpp"
#include "attnet/graphmetrics.hpp"
#include "attnet/motifs.hpp"
#include "attnet/network.hpp"
#include "attnet/regions.hpp"
#include "attnet/stitch.hpp"
#include "attnet/topics.hpp"

namespace attnet {

enum class Stage { Stitch, Build, Backbone, Metrics, Motifs, Communities, Regions, Granger, Topics };

inline constexpr std::array<Stage, 9> kAllStages = {Stage::Stitch,  Stage::Build,       Stage::Backbone,
                                                    Stage::Metrics, Stage::Motifs,      Stage::Communities,
                                                    Stage::Regions, Stage::Granger,     Stage::Topics};

std::string_view stage_name(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view name);

/// Invalid or unusable configuration, detected before any stage runs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stage aborted; `stage()` names it and what() carries the cause.
class StageError : public std::runtime_error {
public:
    StageError(Stage s, const std::string& cause)
        : std::runtime_error(std::string(stage_name(s)) + ": " + cause), stage_(s) {}
    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

struct PipelineConfig {
    std::filesystem::path events;
    std::filesystem::path trends;
    std::filesystem::path regions;     // optional unless the regions stage runs
    std::filesystem::path embeddings;  // optional unless the topics stage runs
    Period period = Period::collection_default();
    StitchConfig stitch;
    double backbone_alpha = 0.05;
    LagScanOptions granger;
    int difference_order = 1;
    int motif_ensemble = 1000;
    int motif_swaps_per_edge = 10;
    std::uint64_t motif_seed = 0;
    std::uint64_t community_seed = 0;
    int community_restarts = 1;
    double community_teleport = 0.15;
    std::vector<std::size_t> topk = {1, 3, 5, 10};
    /// Region flows use the backbones instead of the full aggregates.
    bool regions_on_backbone = false;
    std::set<Stage> stages = {kAllStages.begin(), kAllStages.end()};
    bool write_stage_files = true;
    bool write_report = true;
    std::filesystem::path output = "out";
    /// Thread count for motif ensembles and the Granger matrix. Never changes outputs.
    int workers = 1;
};

/// Parses a JSON config. Relative input paths resolve against the file's
/// directory. Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Checks inputs needed by the enabled stages and that the output directory
/// can be created. Throws ConfigError.
void validate_config(const PipelineConfig& cfg);

struct LayerMetrics {
    std::map<Measure, CentralityVector> centrality;  // on the backbone
    std::map<CountryCode, double> gini;              // out-weight Gini on the full network
};

struct RunSummary {
    std::vector<Series> series;
    std::optional<MultiplexAttention> networks;
    std::optional<MultiplexAttention> backbones;

    std::optional<std::map<Layer, LayerMetrics>> metrics;
    /// Jaccard of top-k media vs public neighbours per country, keyed by k.
    std::map<std::size_t, std::map<CountryCode, double>> jaccard;
    std::map<Layer, MotifZScores> motifs;
    std::map<Layer, std::pair<Digraph, Partition>> communities;
    std::map<Layer, RegionFlow> region_flows;
    std::optional<std::map<EdgeKey, PairOutcome>> granger;
    std::optional<std::map<EdgeKey, PairOutcome>> granger_topic;

    struct StageStatus {
        Stage stage;
        std::string status;  // "ok" or "failed"
        std::string error;
    };
    std::vector<StageStatus> stages;
    bool partial = false;

    struct FileRecord {
        std::string path;  // relative to the output directory
        std::string sha256;
        std::size_t bytes = 0;
    };
    std::vector<FileRecord> files;
};

/// Runs the enabled stages in order, computing disabled upstream stages in
/// memory only, then writes the report (if enabled) and manifest.json.
/// Throws ConfigError before running anything, or StageError after writing a
/// manifest that marks the run partial.
RunSummary run_pipeline(const PipelineConfig& cfg);

/// Writes the plot-ready report files under `dir` and appends them to
/// `summary.files`. Missing results yield header-only files.
void emit_report(RunSummary& summary, const std::filesystem::path& dir);

std::string sha256_hex(std::string_view bytes);

}  // namespace attnet
