#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attnet/core.hpp"
#include "attnet/network.hpp"

namespace attnet {

enum class GrangerDirection { MediaToPublic, PublicToMedia };
enum class PairClass { MediaCausesPublic, PublicCausesMedia, Both, Neither };

std::string_view pair_class_name(PairClass c) noexcept;

/// One lag's F-test of "x Granger-causes y".
struct GrangerTest {
    int lag = 0;
    double F = 0.0;
    double p = 1.0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    int df_num = 0;
    int df_den = 0;
};

/// Regresses y_t on an intercept and y_{t-1..t-lag} (restricted) and
/// additionally on x_{t-1..t-lag} (unrestricted), both over the same
/// T - lag observations, and F-tests the added block.
///
/// Errors: DegenerateSeries when x or y is constant, InsufficientLength when
/// T - 3*lag - 1 < 5, SingularDesign when the regressors are collinear.
GrangerTest granger_test(std::span<const double> x, std::span<const double> y, int lag);

/// Smallest lag-scan feasible length: T - 3*lag - 1 >= 5.
bool lag_feasible(std::size_t length, int lag);

struct GrangerResult {
    GrangerDirection direction = GrangerDirection::MediaToPublic;
    std::optional<int> best_lag;
    double F = 0.0;
    double p = 1.0;
    bool significant = false;
};

struct LagScanOptions {
    int min_lag = 1;
    int max_lag = 14;
    double alpha = 0.05;
};

/// Tests every feasible lag; among lags with p < alpha the largest F wins
/// (smaller lag on ties). Without a significant lag, best_lag is empty and
/// F/p come from the max-F lag. Throws AllLagsInfeasible.
GrangerResult best_lag_scan(std::span<const double> x, std::span<const double> y, GrangerDirection direction,
                            const LagScanOptions& opts = {});

/// Throws DirectionMismatch unless m2p is MediaToPublic and p2m PublicToMedia.
PairClass classify_pair(const GrangerResult& m2p, const GrangerResult& p2m);

/// Media and public daily series of one ordered country pair.
struct PairSeries {
    std::vector<double> media;
    std::vector<double> public_;
};

struct GrangerMatrixOptions {
    LagScanOptions scan;
    /// First-differencing order applied to both series before testing.
    int difference_order = 1;
    int workers = 1;
};

struct PairOutcome {
    std::optional<PairClass> cls;
    GrangerResult m2p;
    GrangerResult p2m;
    std::string error;  // non-empty when the pair could not be tested
};

std::map<EdgeKey, PairOutcome> granger_matrix(const std::map<EdgeKey, PairSeries>& pairs,
                                              const GrangerMatrixOptions& opts = {});

void write_granger_csv(std::ostream& out, const std::map<EdgeKey, PairOutcome>& results);

/// Per-pair feature table for external modelling: network degrees of both
/// endpoints in each layer, series summary statistics, region relation, and
/// the pair class.
void write_feature_table(std::ostream& out, const std::map<EdgeKey, PairOutcome>& results,
                         const std::map<EdgeKey, PairSeries>& pairs, const AttentionNetwork& media,
                         const AttentionNetwork& public_, const RegionMap* regions);

}  // namespace attnet
